// Command line runner: spectrum, iterate, sweep and verify.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "waveholtz/errors.hpp"
#include "waveholtz/experiment.hpp"
#include "waveholtz/filter.hpp"
#include "waveholtz/report_io.hpp"
#include "waveholtz/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wh;

namespace
{
    constexpr const char * version = "0.1.0";

    enum ExitCode
    {
        Ok = 0,
        InvariantFailure = 1,
        ConfigurationError = 2,
        NumericalFailure = 3
    };

    int exit_code(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::Resonance:
        case ErrorKind::Divergence:
        case ErrorKind::Numerical:
            return NumericalFailure;
        default:
            return ConfigurationError;
        }
    }

    struct Globals
    {
        std::string config_path;
        std::string out_dir = "out";
        int workers = 1;
        std::uint64_t seed = 20240601;
        std::vector<std::string> overrides;
    };

    std::string utc_timestamp()
    {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm {};
        gmtime_r(&t, &tm);
        std::ostringstream out;
        out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return out.str();
    }

    ExperimentConfig load_config(const Globals& g, json& raw)
    {
        raw = json::object();
        if (!g.config_path.empty())
        {
            std::ifstream in(g.config_path);
            if (!in)
                throw Error(ErrorKind::Configuration, "cannot open config file " + g.config_path);
            raw = json::parse(in, nullptr, false, true);
            if (raw.is_discarded())
                throw Error(ErrorKind::Configuration, "config file " + g.config_path + " is not valid JSON");
        }
        for (const auto& s : g.overrides)
            apply_override(raw, s);
        return parse_config(raw);
    }

    json manifest_base(const std::string& command, const Globals& g)
    {
        json m;
        m["command"] = command;
        m["version"] = version;
        m["timestamp"] = utc_timestamp();
        m["seed"] = g.seed;
        m["workers"] = g.workers;
        m["filter"] = {{"alpha", FilterConstants::alpha},
                       {"delta", FilterConstants::delta},
                       {"switch_radius", filter_switch_radius},
                       {"taylor_degree", filter_taylor_degree}};
        return m;
    }

    void write_manifest(const fs::path& dir, const json& m)
    {
        write_text(dir / "manifest.json", m.dump(2) + "\n");
    }

    std::string optional_field(double x)
    {
        return std::isnan(x) ? std::string() : format_double(x);
    }

    json fit_json(const SweepFit& f)
    {
        return {{"slope", f.slope}, {"intercept", f.intercept}, {"points", f.omegas.size()}};
    }

    // fits value(omega) where all values are positive; records the reason otherwise
    void add_fit(json& fits, const std::string& name, const std::vector<double>& omegas, const std::vector<double>& values)
    {
        std::vector<double> w, v;
        for (std::size_t i = 0; i < omegas.size(); ++i)
            if (std::isfinite(values[i]) && values[i] > 0.0)
            {
                w.push_back(omegas[i]);
                v.push_back(values[i]);
            }
        if (w.size() < 3)
        {
            fits[name] = {{"skipped", "fewer than 3 positive values"}};
            return;
        }
        fits[name] = fit_json(fit_power_law(w, v));
    }

    int cmd_spectrum(const Globals& g)
    {
        json raw;
        const ExperimentConfig c = load_config(g, raw);
        const fs::path out = g.out_dir;
        fs::create_directories(out);

        json m = manifest_base("spectrum", g);
        m["config"] = to_json(c);

        if (!c.sweep)
        {
            const SpectralReport r = run_spectrum(c, c.omega);
            const double w = c.omega;

            CsvTable table({"j", "re_lambda_over_omega", "im_lambda_over_omega", "beta_abs", "is_lambda_star"});
            ChartSeries eig {"eigenvalues", {}, {}, false};
            ChartSeries star {"lambda_star", {}, {}, false};
            for (std::size_t j = 0; j < r.eigenvalues.size(); ++j)
            {
                const complex z = r.eigenvalues[j] / w;
                const std::string x = format_double(z.real()), y = format_double(z.imag());
                const bool is_star = (j == r.lambda_star.index);
                table.add_row({std::to_string(j), x, y, format_double(std::abs(beta_hat(z))), is_star ? "1" : "0"});
                eig.x.push_back(x);
                eig.y.push_back(y);
                if (is_star)
                {
                    star.x.push_back(x);
                    star.y.push_back(y);
                }
            }
            table.write(out / "spectrum.csv");

            // parabolic level sets x = alpha min((y-1)^2, (y+1)^2) - eps
            CsvTable levels({"eps", "x", "y"});
            std::vector<ChartSeries> series {eig, star};
            const double level_eps[3] = {r.lambda_star.eps, 0.1, 0.5};
            for (double eps : level_eps)
            {
                ChartSeries s {"eps=" + format_double(eps), {}, {}, true};
                for (int k = 0; k <= 200; ++k)
                {
                    const double y = -2.0 + 4.0 * k / 200.0;
                    const double x = FilterConstants::alpha * std::min((y - 1) * (y - 1), (y + 1) * (y + 1)) - eps;
                    if (x > 0.0)
                        continue;
                    levels.add_row({format_double(eps), format_double(x), format_double(y)});
                    s.x.push_back(format_double(x));
                    s.y.push_back(format_double(y));
                }
                series.push_back(s);
            }
            levels.write(out / "levels.csv");
            write_text(out / "spectrum.svg", render_svg({"eigenvalues of A / omega", "Re", "Im"}, series));

            m["result"] = {{"omega", w},
                           {"dofs", r.eigenvalues.size()},
                           {"lambda_star", {r.lambda_star.lambda.real(), r.lambda_star.lambda.imag()}},
                           {"eps_star", r.lambda_star.eps},
                           {"gap", r.lambda_star.gap},
                           {"kappa", r.kappa},
                           {"rho", r.rho},
                           {"rate_bound", r.rate_bound},
                           {"diagonalizable", r.diagonalizable},
                           {"max_re_lambda", r.max_real_part}};
            write_manifest(out, m);
            std::cout << "eps* = " << format_double(r.lambda_star.eps) << "  kappa = " << format_double(r.kappa)
                      << "  rho = " << format_double(r.rho) << "\n";
            return Ok;
        }

        const std::vector<double> omegas = c.omegas();
        std::vector<double> eps(omegas.size()), kappa(omegas.size()), gap(omegas.size());
        CsvTable table({"omega", "eps_star", "kappa", "rho", "gap", "max_re_lambda"});
        for (std::size_t k = 0; k < omegas.size(); ++k)
        {
            const SpectralReport r = run_spectrum(c, omegas[k]);
            eps[k] = r.lambda_star.eps;
            kappa[k] = r.kappa;
            gap[k] = r.lambda_star.gap;
            table.add_row({format_double(omegas[k]), format_double(eps[k]), format_double(kappa[k]), format_double(r.rho),
                           format_double(gap[k]), format_double(r.max_real_part)});
            std::cerr << "omega = " << omegas[k] << "  eps* = " << eps[k] << "  kappa = " << kappa[k] << "\n";
        }
        table.write(out / "spectrum_sweep.csv");

        json fits;
        add_fit(fits, "eps_star", omegas, eps);
        add_fit(fits, "kappa", omegas, kappa);
        add_fit(fits, "gap", omegas, gap);
        m["fits"] = fits;

        const auto w = table.column("omega");
        write_text(out / "spectrum_sweep.svg",
                   render_svg({"spectral quantities vs omega", "omega", "value", true, true},
                              {{"eps_star", w, table.column("eps_star"), true}, {"kappa", w, table.column("kappa"), true}}));
        write_manifest(out, m);
        std::cout << fits.dump(2) << "\n";
        return Ok;
    }

    std::vector<std::string> summary_row(const PointResult& r)
    {
        return {format_double(r.omega),
                r.N ? std::to_string(*r.N) : std::string(),
                optional_field(r.rate_first),
                optional_field(r.rate_avg_e),
                optional_field(r.rate_avg_mu),
                r.spectrum ? format_double(r.spectrum->lambda_star.eps) : std::string(),
                r.spectrum ? format_double(r.spectrum->kappa) : std::string()};
    }

    const std::vector<std::string> summary_header {"omega", "N", "rate_first", "rate_avg_e", "rate_avg_mu", "eps_star", "kappa"};

    int cmd_iterate(const Globals& g)
    {
        json raw;
        const ExperimentConfig c = load_config(g, raw);
        if (c.sweep)
            throw Error(ErrorKind::Configuration, "iterate runs a single omega; use the sweep command for sweeps");
        const fs::path out = g.out_dir;
        fs::create_directories(out);

        json m = manifest_base("iterate", g);
        m["config"] = to_json(c);

        const PointResult r = run_point(c, c.omega);
        const IterationReport& rep = r.report;

        CsvTable table({"n", "res", "err_e", "err_mu"});
        const std::size_t rows = std::max<std::size_t>({rep.res.size() + 1, rep.err_e.size(), rep.err_mu.size()});
        for (std::size_t n = 0; n < rows; ++n)
        {
            table.add_row({std::to_string(n),
                           (n >= 1 && n <= rep.res.size()) ? format_double(rep.res[n - 1]) : std::string(),
                           n < rep.err_e.size() ? format_double(rep.err_e[n]) : std::string(),
                           n < rep.err_mu.size() ? format_double(rep.err_mu[n]) : std::string()});
        }
        table.write(out / "residuals.csv");

        CsvTable rates(summary_header);
        rates.add_row(summary_row(r));
        rates.write(out / "rates.csv");

        std::vector<ChartSeries> series;
        auto add_series = [&](const char * name)
        {
            ChartSeries s {name, {}, {}, true};
            const auto ns = table.column("n"), ys = table.column(name);
            for (std::size_t i = 0; i < ns.size(); ++i)
                if (!ys[i].empty())
                {
                    s.x.push_back(ns[i]);
                    s.y.push_back(ys[i]);
                }
            if (!s.x.empty())
                series.push_back(s);
        };
        add_series("res");
        add_series("err_e");
        add_series("err_mu");
        write_text(out / "residuals.svg", render_svg({"WaveHoltz iteration history", "iteration", "value", false, true}, series));

        m["result"] = {{"omega", r.omega},
                       {"dofs", r.dofs},
                       {"n_steps", r.n_steps},
                       {"iterations", rep.iterations},
                       {"converged_at_start", rep.converged_at_start},
                       {"N", r.N ? json(*r.N) : json(nullptr)},
                       {"rate_first", std::isnan(r.rate_first) ? json(nullptr) : json(r.rate_first)},
                       {"rate_avg_e", std::isnan(r.rate_avg_e) ? json(nullptr) : json(r.rate_avg_e)},
                       {"rate_avg_mu", std::isnan(r.rate_avg_mu) ? json(nullptr) : json(r.rate_avg_mu)},
                       {"rate_window_used", r.rate_window_used}};
        if (r.spectrum)
            m["result"]["spectrum"] = {{"eps_star", r.spectrum->lambda_star.eps}, {"kappa", r.spectrum->kappa}, {"rho", r.spectrum->rho}};
        write_manifest(out, m);

        if (rep.converged_at_start)
            std::cout << "converged at start\n";
        else
            std::cout << "iterations = " << rep.iterations << "  N = " << (r.N ? std::to_string(*r.N) : std::string("not reached")) << "\n";
        return Ok;
    }

    int cmd_sweep(const Globals& g)
    {
        json raw;
        ExperimentConfig c = load_config(g, raw);
        if (!c.sweep)
        {
            // 10 pi to 30 pi with 9 uniformly spaced points
            c.sweep = OmegaSweep {10.0 * std::numbers::pi, 30.0 * std::numbers::pi, 9};
            if (c.dimension == 2 && !c.allow_large_2d)
                throw Error(ErrorKind::Configuration, "the default 2D sweep reaches omega = 30 pi; set allow_large_2d=true");
        }
        if (c.dimension == 2)
            std::cerr << "warning: 2D sweeps above omega = 10 pi take from minutes to hours\n";

        const fs::path out = g.out_dir;
        fs::create_directories(out);

        json m = manifest_base("sweep", g);
        m["config"] = to_json(c);

        const std::vector<PointResult> results = run_sweep(c, g.workers);

        CsvTable table(summary_header);
        std::vector<double> omegas, N, first, avg_e, avg_mu, eps, kappa;
        json failures = json::array();
        for (const auto& r : results)
        {
            if (!r.error.empty())
            {
                failures.push_back({{"omega", r.omega}, {"error", r.error}});
                table.add_row({format_double(r.omega), "", "", "", "", "", ""});
                continue;
            }
            table.add_row(summary_row(r));
            omegas.push_back(r.omega);
            N.push_back(r.N ? double(*r.N) : std::nan(""));
            first.push_back(1.0 - r.rate_first);
            avg_e.push_back(1.0 - r.rate_avg_e);
            avg_mu.push_back(1.0 - r.rate_avg_mu);
            eps.push_back(r.spectrum ? r.spectrum->lambda_star.eps : std::nan(""));
            kappa.push_back(r.spectrum ? r.spectrum->kappa : std::nan(""));
        }
        table.write(out / "sweep.csv");

        json fits;
        if (omegas.size() >= 3)
        {
            add_fit(fits, "N", omegas, N);
            add_fit(fits, "one_minus_rate_first", omegas, first);
            add_fit(fits, "one_minus_rate_avg_e", omegas, avg_e);
            add_fit(fits, "one_minus_rate_avg_mu", omegas, avg_mu);
            add_fit(fits, "eps_star", omegas, eps);
            add_fit(fits, "kappa", omegas, kappa);
        }
        m["fits"] = fits;
        m["failures"] = failures;

        CsvTable fit_table({"quantity", "slope", "intercept", "points"});
        for (auto it = fits.begin(); it != fits.end(); ++it)
            if (it.value().contains("slope"))
                fit_table.add_row({it.key(), format_double(it.value()["slope"].get<double>()), format_double(it.value()["intercept"].get<double>()),
                                   std::to_string(it.value()["points"].get<int>())});
        fit_table.write(out / "fits.csv");

        std::vector<ChartSeries> series;
        const auto w = table.column("omega");
        for (const char * name : {"N", "eps_star", "kappa"})
        {
            ChartSeries s {name, {}, {}, true};
            const auto ys = table.column(name);
            for (std::size_t i = 0; i < w.size(); ++i)
                if (!ys[i].empty())
                {
                    s.x.push_back(w[i]);
                    s.y.push_back(ys[i]);
                }
            if (!s.x.empty())
                series.push_back(s);
        }
        write_text(out / "sweep.svg", render_svg({"sweep over omega", "omega", "value", true, true}, series));
        write_manifest(out, m);

        std::cout << fits.dump(2) << "\n";
        if (!failures.empty())
            std::cerr << failures.size() << " sweep point(s) failed; see manifest.json\n";
        return failures.size() == results.size() ? NumericalFailure : Ok;
    }

    int cmd_verify(const Globals& g, const std::string& level)
    {
        VerifyOptions opts;
        if (level == "quick")
            opts.level = VerifyLevel::Quick;
        else if (level == "full")
            opts.level = VerifyLevel::Full;
        else
            throw Error(ErrorKind::Configuration, "verify level must be quick or full");
        opts.seed = g.seed;

        const fs::path out = g.out_dir;
        fs::create_directories(out);

        const auto results = run_verify(opts);

        json m = manifest_base("verify", g);
        m["level"] = level;
        CsvTable table({"check", "passed"});
        int failed = 0;
        for (const auto& r : results)
        {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
            table.add_row({r.name, r.passed ? "1" : "0"});
            m["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
            if (!r.passed)
                ++failed;
        }
        table.write(out / "verify.csv");
        write_manifest(out, m);

        std::cout << (results.size() - failed) << "/" << results.size() << " checks passed\n";
        return failed == 0 ? Ok : InvariantFailure;
    }
} // namespace

int main(int argc, char ** argv)
{
    CLI::App app {"WaveHoltz iteration experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON experiment configuration");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--workers", g.workers, "concurrent sweep points")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed recorded in the manifest and used by property checks")->capture_default_str();
    app.add_option("--set", g.overrides, "override a configuration value, key.path=value (repeatable)");

    auto * spectrum = app.add_subcommand("spectrum", "eigenvalues, eps*, kappa and rho of the discretization");
    auto * iterate = app.add_subcommand("iterate", "run the WaveHoltz iteration at one frequency");
    auto * sweep = app.add_subcommand("sweep", "run the iteration over a range of frequencies");
    auto * verify = app.add_subcommand("verify", "run the invariant suites");

    std::string level = "quick";
    verify->add_option("level", level, "quick or full")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : ConfigurationError;
    }

    try
    {
        if (*spectrum)
            return cmd_spectrum(g);
        if (*iterate)
            return cmd_iterate(g);
        if (*sweep)
            return cmd_sweep(g);
        if (*verify)
            return cmd_verify(g, level);
    }
    catch (const Error& e)
    {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    }
    catch (const nlohmann::json::exception& e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return ConfigurationError;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return NumericalFailure;
    }
    return Ok;
}
