#include "waveholtz/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "waveholtz/errors.hpp"

namespace wh
{
    std::string format_double(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";

        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), x);
        return std::string(buf, res.ptr);
    }

    CsvTable::CsvTable(std::vector<std::string> header) : head(std::move(header)) {}

    void CsvTable::add_row(std::vector<std::string> row)
    {
        if (row.size() != head.size())
            throw Error(ErrorKind::Dimension, "csv row has " + std::to_string(row.size()) + " fields, header has " + std::to_string(head.size()));
        body.push_back(std::move(row));
    }

    std::vector<std::string> CsvTable::column(const std::string& name) const
    {
        const auto it = std::find(head.begin(), head.end(), name);
        if (it == head.end())
            throw Error(ErrorKind::Configuration, "no csv column '" + name + "'");
        const std::size_t k = it - head.begin();

        std::vector<std::string> col;
        col.reserve(body.size());
        for (const auto& row : body)
            col.push_back(row[k]);
        return col;
    }

    static void write_row(std::ostream& out, const std::vector<std::string>& row)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i > 0)
                out << ',';
            out << row[i];
        }
        out << '\n';
    }

    std::string CsvTable::str() const
    {
        std::ostringstream out;
        write_row(out, head);
        for (const auto& row : body)
            write_row(out, row);
        return out.str();
    }

    void CsvTable::write(const std::filesystem::path& path) const
    {
        write_text(path, str());
    }

    void write_text(const std::filesystem::path& path, const std::string& text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorKind::Configuration, "cannot write " + path.string());
        out << text;
    }

    static std::string escape(const std::string& s)
    {
        std::string out;
        for (char c : s)
        {
            switch (c)
            {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
            }
        }
        return out;
    }

    std::string render_svg(const ChartSpec& spec, const std::vector<ChartSeries>& series)
    {
        constexpr double width = 640, height = 480;
        constexpr double left = 70, right = 20, top = 40, bottom = 50;
        static const char * colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

        auto transform = [](double v, bool log) { return log ? std::log10(v) : v; };

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& s : series)
        {
            for (std::size_t i = 0; i < s.x.size(); ++i)
            {
                const double x = transform(std::stod(s.x[i]), spec.log_x);
                const double y = transform(std::stod(s.y[i]), spec.log_y);
                if (!std::isfinite(x) || !std::isfinite(y))
                    continue;
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
        if (!(xmax > xmin))
        {
            xmin = std::isfinite(xmin) ? xmin - 1.0 : 0.0;
            xmax = xmin + 2.0;
        }
        if (!(ymax > ymin))
        {
            ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
            ymax = ymin + 2.0;
        }

        auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
        auto py = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title) << "</text>\n";
        out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\"" << height - top - bottom
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">" << escape(spec.x_label)
            << (spec.log_x ? " (log10)" : "") << "</text>\n";
        out << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << height / 2 << ")\">"
            << escape(spec.y_label) << (spec.log_y ? " (log10)" : "") << "</text>\n";

        // axis extremes
        out << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << format_double(xmin) << "</text>\n";
        out << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << format_double(xmax) << "</text>\n";
        out << "<text x=\"" << left - 4 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\">" << format_double(ymin) << "</text>\n";
        out << "<text x=\"" << left - 4 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << format_double(ymax) << "</text>\n";

        for (std::size_t k = 0; k < series.size(); ++k)
        {
            const auto& s = series[k];
            const char * color = colors[k % 6];
            out << "<g class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"" << color << "\" stroke=\"" << color << "\">\n";

            if (s.line)
            {
                out << "<polyline fill=\"none\" points=\"";
                for (std::size_t i = 0; i < s.x.size(); ++i)
                {
                    const double x = transform(std::stod(s.x[i]), spec.log_x);
                    const double y = transform(std::stod(s.y[i]), spec.log_y);
                    if (std::isfinite(x) && std::isfinite(y))
                        out << px(x) << ',' << py(y) << ' ';
                }
                out << "\"/>\n";
            }

            for (std::size_t i = 0; i < s.x.size(); ++i)
            {
                const double x = transform(std::stod(s.x[i]), spec.log_x);
                const double y = transform(std::stod(s.y[i]), spec.log_y);
                const bool shown = std::isfinite(x) && std::isfinite(y);
                out << "<circle cx=\"" << (shown ? px(x) : -10.0) << "\" cy=\"" << (shown ? py(y) : -10.0) << "\" r=\"" << (s.line ? 1.0 : 2.5)
                    << "\" data-x=\"" << s.x[i] << "\" data-y=\"" << s.y[i] << "\"/>\n";
            }
            out << "</g>\n";

            out << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 + 16 * k << "\" text-anchor=\"end\" fill=\"" << color << "\">"
                << escape(s.name) << "</text>\n";
        }

        out << "</svg>\n";
        return out.str();
    }

    static std::string attribute(const std::string& tag, const std::string& name)
    {
        const std::string key = name + "=\"";
        const auto a = tag.find(key);
        if (a == std::string::npos)
            return {};
        const auto b = tag.find('"', a + key.size());
        return tag.substr(a + key.size(), b - a - key.size());
    }

    std::vector<ChartPoint> read_svg_points(const std::string& svg)
    {
        std::vector<ChartPoint> points;
        std::string current;

        std::istringstream in(svg);
        std::string line;
        while (std::getline(in, line))
        {
            if (line.rfind("<g class=\"series\"", 0) == 0)
                current = attribute(line, "data-name");
            else if (line.rfind("<circle", 0) == 0)
                points.push_back({current, attribute(line, "data-x"), attribute(line, "data-y")});
        }
        return points;
    }
} // namespace wh
