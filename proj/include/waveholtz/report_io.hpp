#ifndef WAVEHOLTZ_REPORT_IO_HPP
#define WAVEHOLTZ_REPORT_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace wh
{
    /// shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
    std::string format_double(double x);

    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header);

        void add_row(std::vector<std::string> row);

        const std::vector<std::string>& header() const
        {
            return head;
        }

        const std::vector<std::vector<std::string>>& rows() const
        {
            return body;
        }

        /// column as written, by header name.
        std::vector<std::string> column(const std::string& name) const;

        std::string str() const;
        void write(const std::filesystem::path& path) const;

    private:
        std::vector<std::string> head;
        std::vector<std::vector<std::string>> body;
    };

    struct ChartSeries
    {
        std::string name;
        std::vector<std::string> x; // CSV strings, echoed as data attributes
        std::vector<std::string> y;
        bool line = false; // polyline through the points instead of markers
    };

    struct ChartSpec
    {
        std::string title;
        std::string x_label;
        std::string y_label;
        bool log_x = false;
        bool log_y = false;
    };

    // Minimal SVG scatter/line chart. Every point carries data-x and data-y
    // attributes holding exactly the CSV strings it was drawn from.
    std::string render_svg(const ChartSpec& spec, const std::vector<ChartSeries>& series);
    void write_text(const std::filesystem::path& path, const std::string& text);

    /// (name, x, y) triples read back from data attributes of a rendered chart.
    struct ChartPoint
    {
        std::string series;
        std::string x;
        std::string y;
    };

    std::vector<ChartPoint> read_svg_points(const std::string& svg);
} // namespace wh

#endif
