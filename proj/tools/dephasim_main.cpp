// dephasim: exact dephasing dynamics of a qubit in an Ohmic-family reservoir.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dephasim/optimizer.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dephasim;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string render() const {
        std::string out;
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += format_value(row[i]);
            }
            out += '\n';
        }
        return out;
    }
};

struct CommonOptions {
    double s = 1.0;
    std::string cutoff = "soft";
    std::string temp = "zero";
    double t_tilde = 1.0;
    double omega_c = 1.0;
    double tau_max = 50.0;
    int points = 500;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_panels = 4096;
    std::string out_dir;
    int jobs = 0;

    CutoffKind cutoff_kind() const {
        if (cutoff == "soft") return CutoffKind::Soft;
        if (cutoff == "hard") return CutoffKind::Hard;
        throw CLI::ValidationError("--cutoff", "must be 'soft' or 'hard'");
    }
    TemperatureSpec temperature() const {
        if (temp == "zero") return TemperatureSpec::zero();
        if (temp == "finite") return TemperatureSpec::finite(t_tilde);
        if (temp == "high") return TemperatureSpec::high_t_limit(t_tilde);
        throw CLI::ValidationError("--temp", "must be 'zero', 'finite' or 'high'");
    }
    SpectralParams spectral() const {
        const SpectralParams p{s, omega_c, cutoff_kind()};
        p.validate();  // reject bad inputs before any numerics start
        return p;
    }
    QuadratureConfig quadrature() const {
        QuadratureConfig cfg;
        cfg.abs_tol = abs_tol;
        cfg.rel_tol = rel_tol;
        cfg.max_panels = max_panels;
        cfg.validate();
        return cfg;
    }
};


class RunWriter {
  public:
    explicit RunWriter(const CommonOptions& opt) : start_(std::chrono::steady_clock::now()) {
        if (!opt.out_dir.empty()) {
            dir_ = opt.out_dir;
        } else if (const char* env = std::getenv("DEPHASIM_OUT"); env && *env) {
            dir_ = env;
        } else {
            dir_ = ".";
        }
        fs::create_directories(dir_);
    }

    ~RunWriter() {
        if (!committed_) {
            for (const auto& f : staged_) {
                std::error_code ec;
                fs::remove(f, ec);
            }
        }
    }

    void stage(const std::string& name, const std::string& bytes) {
        const fs::path tmp = dir_ / (name + ".partial");
        std::ofstream out(tmp, std::ios::binary);
        out << bytes;
        out.close();
        if (!out) throw std::runtime_error("failed to write " + tmp.string());
        staged_.push_back(tmp);
        names_.push_back(name);
        checksums_[name] = hex64(fnv1a64(bytes));
    }

    void commit(const std::string& command, const json& config) {
        json meta;
        meta["tool"] = "dephasim";
        meta["version"] = kVersion;
        meta["command"] = command;
        meta["config"] = config;
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        meta["duration_seconds"] = std::chrono::duration<double>(elapsed).count();
        json sums;
        for (const auto& name : names_) sums[name] = checksums_[name];
        meta["outputs"] = sums;

        for (size_t i = 0; i < staged_.size(); ++i)
            fs::rename(staged_[i], dir_ / names_[i]);
        const fs::path meta_tmp = dir_ / "meta.json.partial";
        std::ofstream out(meta_tmp, std::ios::binary);
        out << meta.dump(2) << '\n';
        out.close();
        if (!out) throw std::runtime_error("failed to write manifest");
        fs::rename(meta_tmp, dir_ / "meta.json");
        committed_ = true;
    }

  private:
    fs::path dir_;
    std::vector<fs::path> staged_;
    std::vector<std::string> names_;
    std::map<std::string, std::string> checksums_;
    std::chrono::steady_clock::time_point start_;
    bool committed_ = false;
};

json base_config(const CommonOptions& opt, bool with_spectral) {
    json cfg;
    if (with_spectral) cfg["s"] = opt.s;
    cfg["cutoff"] = opt.cutoff;
    cfg["temp"] = opt.temp;
    if (opt.temp != "zero") cfg["t_tilde"] = opt.t_tilde;
    cfg["omega_c"] = opt.omega_c;
    cfg["abs_tol"] = opt.abs_tol;
    cfg["rel_tol"] = opt.rel_tol;
    cfg["max_panels"] = opt.max_panels;
    return cfg;
}

std::string plot_script(const std::string& title, const std::string& ylabel,
                        const std::vector<std::pair<int, std::string>>& series,
                        bool logx = false) {
    std::string gp;
    gp += "set datafile separator \",\"\n";
    gp += "set key autotitle columnhead\n";
    gp += "set title \"" + title + "\"\n";
    gp += "set ylabel \"" + ylabel + "\"\n";
    if (logx) gp += "set logscale x\n";
    gp += "plot ";
    for (size_t i = 0; i < series.size(); ++i) {
        if (i) gp += ", ";
        gp += "\"data.csv\" using 1:" + std::to_string(series[i].first) +
              " with lines title \"" + series[i].second + "\"";
    }
    gp += "\n";
    return gp;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * i / (n - 1);
    return grid;
}

// ---- subcommand bodies ----------------------------------------------------

void run_trace(const CommonOptions& opt) {
    RunWriter writer(opt);
    const TimeGrid grid = TimeGrid::uniform(opt.tau_max, opt.points);
    const DephasingTrace trace =
        compute_trace(opt.spectral(), opt.temperature(), grid, opt.quadrature());

    CsvTable csv;
    csv.header = {"tau", "lambda", "gamma", "capacity"};
    for (size_t i = 0; i < trace.grid.tau.size(); ++i)
        csv.rows.push_back({trace.grid.tau[i], trace.lambda[i], trace.gamma[i],
                            channel_capacity(trace.lambda[i])});
    writer.stage("data.csv", csv.render());
    writer.stage("plot.gp",
                 plot_script("dephasing trace", "value",
                             {{2, "lambda"}, {3, "gamma"}, {4, "capacity"}}));
    json cfg = base_config(opt, true);
    cfg["tau_max"] = opt.tau_max;
    cfg["points"] = opt.points;
    writer.commit("trace", cfg);
}

void run_stationary(const CommonOptions& opt) {
    RunWriter writer(opt);
    const StationaryCoherence sc =
        stationary_coherence(opt.spectral(), opt.temperature(), opt.quadrature());
    CsvTable csv;
    csv.header = {"s", "trapped", "lambda_inf", "coherence"};
    if (sc.trapped) {
        csv.rows.push_back({opt.s, 1.0, -std::log(*sc.trapped), *sc.trapped});
    } else {
        csv.rows.push_back({opt.s, 0.0, std::numeric_limits<double>::infinity(), 0.0});
    }
    writer.stage("data.csv", csv.render());
    writer.commit("stationary", base_config(opt, true));
}

void run_sopt(const CommonOptions& opt) {
    RunWriter writer(opt);
    const Optimum o = optimal_s(opt.cutoff_kind(), opt.temperature(), opt.quadrature());
    CsvTable csv;
    csv.header = {"s_opt", "coherence"};
    csv.rows.push_back({o.s_opt, o.coherence_at_opt});
    writer.stage("data.csv", csv.render());
    writer.commit("sopt", base_config(opt, false));
}

void run_nonmark(const CommonOptions& opt) {
    RunWriter writer(opt);
    const BackflowReport report = nonmarkovianity_measure(
        opt.spectral(), opt.temperature(), opt.tau_max, opt.quadrature());
    CsvTable csv;
    csv.header = {"interval", "a", "b", "truncated", "q_gain"};
    int idx = 0;
    const QuadratureConfig cfg = opt.quadrature();
    for (const BackflowInterval& iv : report.intervals) {
        const double q_a = channel_capacity(
            dephasing_factor(opt.spectral(), opt.temperature(), iv.begin, cfg));
        const double q_b = channel_capacity(
            dephasing_factor(opt.spectral(), opt.temperature(), iv.end, cfg));
        csv.rows.push_back({static_cast<double>(idx++), iv.begin, iv.end,
                            iv.truncated ? 1.0 : 0.0, q_b - q_a});
    }
    writer.stage("data.csv", csv.render());
    json cfg_json = base_config(opt, true);
    cfg_json["tau_max"] = opt.tau_max;
    cfg_json["n_q"] = report.n_q;
    writer.commit("nonmark", cfg_json);
}

void run_crossover(const CommonOptions& opt) {
    RunWriter writer(opt);
    const double s_star =
        markovian_crossover(opt.temperature(), opt.cutoff_kind(), opt.quadrature());
    CsvTable csv;
    csv.header = {"s_star"};
    csv.rows.push_back({s_star});
    writer.stage("data.csv", csv.render());
    writer.commit("crossover", base_config(opt, false));
}

void run_convexity(const CommonOptions& opt, double x_max, int n) {
    RunWriter writer(opt);
    const Convexity c = convexity_check(opt.spectral(), opt.temperature(), x_max, n);
    CsvTable csv;
    csv.header = {"s", "nonconvex"};
    csv.rows.push_back({opt.s, c == Convexity::NonConvex ? 1.0 : 0.0});
    writer.stage("data.csv", csv.render());
    json cfg = base_config(opt, true);
    cfg["x_max"] = x_max;
    cfg["n"] = n;
    writer.commit("convexity", cfg);
}

void run_sweep_temp(const CommonOptions& opt, double t_min, double t_max, int n) {
    RunWriter writer(opt);
    const SweepResult sweep =
        temperature_sweep(opt.cutoff_kind(), log_grid(t_min, t_max, n), opt.quadrature());
    CsvTable csv;
    csv.header = {"t_tilde", "s_opt", "coherence"};
    for (size_t i = 0; i < sweep.axis.size(); ++i)
        csv.rows.push_back({sweep.axis[i], sweep.column("s_opt").values[i],
                            sweep.column("coherence").values[i]});
    writer.stage("data.csv", csv.render());
    writer.stage("plot.gp", plot_script("optimal Ohmicity vs temperature", "s_opt",
                                        {{2, "s_opt"}, {3, "coherence"}}, true));
    json cfg = base_config(opt, false);
    cfg["t_min"] = t_min;
    cfg["t_max"] = t_max;
    cfg["t_points"] = n;
    writer.commit("sweep-temp", cfg);
}

void run_sweep_s(const CommonOptions& opt, double s_min, double s_max, int n) {
    RunWriter writer(opt);
    const SweepResult sweep = ohmicity_sweep(linear_grid(s_min, s_max, n),
                                             opt.temperature(), opt.tau_max,
                                             opt.quadrature());
    CsvTable csv;
    csv.header = {"s"};
    for (const SweepColumn& col : sweep.columns) csv.header.push_back(col.name);
    for (size_t i = 0; i < sweep.axis.size(); ++i) {
        std::vector<double> row{sweep.axis[i]};
        for (const SweepColumn& col : sweep.columns) row.push_back(col.values[i]);
        csv.rows.push_back(std::move(row));
    }
    writer.stage("data.csv", csv.render());
    writer.stage("plot.gp",
                 plot_script("stationary coherence and back-flow vs s", "value",
                             {{2, "coherence_soft"}, {3, "coherence_hard"},
                              {4, "nq_soft"}, {5, "nq_hard"}}));
    json cfg = base_config(opt, false);
    cfg["s_min"] = s_min;
    cfg["s_max"] = s_max;
    cfg["s_points"] = n;
    cfg["tau_max"] = opt.tau_max;
    writer.commit("sweep-s", cfg);
}

void run_figure(const CommonOptions& opt, const std::string& which) {
    RunWriter writer(opt);
    const QuadratureConfig cfg = opt.quadrature();
    if (which == "fig1") {
        const std::vector<double> grid = log_grid(0.01, 20.0, 25);
        const SweepResult soft = temperature_sweep(CutoffKind::Soft, grid, cfg);
        const SweepResult hard = temperature_sweep(CutoffKind::Hard, grid, cfg);
        CsvTable csv;
        csv.header = {"t_tilde", "s_opt_soft", "coherence_soft", "s_opt_hard",
                      "coherence_hard"};
        for (size_t i = 0; i < grid.size(); ++i)
            csv.rows.push_back({grid[i], soft.column("s_opt").values[i],
                                soft.column("coherence").values[i],
                                hard.column("s_opt").values[i],
                                hard.column("coherence").values[i]});
        writer.stage("data.csv", csv.render());
        writer.stage("plot.gp",
                     plot_script("s_opt and stationary coherence vs temperature", "value",
                                 {{2, "s_opt soft"}, {3, "coherence soft"},
                                  {4, "s_opt hard"}, {5, "coherence hard"}}, true));
    } else if (which == "fig2") {
        const std::vector<double> grid = linear_grid(1.05, 6.0, 100);
        CsvTable csv;
        csv.header = {"s", "coherence_soft", "coherence_hard"};
        const auto tz = TemperatureSpec::zero();
        for (double s : grid) {
            const auto soft = stationary_coherence({s, opt.omega_c, CutoffKind::Soft}, tz, cfg);
            const auto hard = stationary_coherence({s, opt.omega_c, CutoffKind::Hard}, tz, cfg);
            csv.rows.push_back({s, soft.trapped.value_or(0.0), hard.trapped.value_or(0.0)});
        }
        writer.stage("data.csv", csv.render());
        writer.stage("plot.gp",
                     plot_script("stationary coherence vs s (zero T)", "coherence",
                                 {{2, "soft"}, {3, "hard"}}));
    } else if (which == "fig3") {
        const std::vector<double> grid = linear_grid(0.25, 6.0, 24);
        const SweepResult sweep =
            ohmicity_sweep(grid, opt.temperature(), opt.tau_max, cfg);
        CsvTable csv;
        csv.header = {"s", "coherence_soft_norm", "nq_soft_norm",
                      "coherence_hard_norm", "nq_hard_norm"};
        for (size_t i = 0; i < grid.size(); ++i)
            csv.rows.push_back({grid[i],
                                sweep.column("coherence_soft_norm").values[i],
                                sweep.column("nq_soft_norm").values[i],
                                sweep.column("coherence_hard_norm").values[i],
                                sweep.column("nq_hard_norm").values[i]});
        writer.stage("data.csv", csv.render());
        writer.stage("plot.gp",
                     plot_script("normalized N_Q and stationary coherence vs s", "normalized",
                                 {{2, "coherence soft"}, {3, "N_Q soft"},
                                  {4, "coherence hard"}, {5, "N_Q hard"}}));
    } else {
        throw CLI::ValidationError("figure", "must be one of fig1, fig2, fig3");
    }
    json cfg_json = base_config(opt, false);
    cfg_json["figure"] = which;
    if (which == "fig3") cfg_json["tau_max"] = opt.tau_max;
    writer.commit("figure", cfg_json);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dephasim: pure-dephasing qubit dynamics in Ohmic-family reservoirs"};
    app.set_version_flag("--version", std::string("dephasim ") + kVersion);
    app.require_subcommand(1);

    CommonOptions opt;

    // Options live on the app so a flat key=value --config file resolves
    // them directly; subcommands fall through unmatched flags to the app.
    app.add_option("--s", opt.s, "Ohmicity exponent s");
    app.add_option("--cutoff", opt.cutoff, "Cutoff kind: soft|hard");
    app.add_option("--temp", opt.temp, "Temperature regime: zero|finite|high");
    app.add_option("--t-tilde", opt.t_tilde, "Dimensionless temperature 2 k_B T / omega_c");
    app.add_option("--omega-c", opt.omega_c, "Cutoff frequency (unit conversion only)");
    app.add_option("--abs-tol", opt.abs_tol, "Quadrature absolute tolerance");
    app.add_option("--rel-tol", opt.rel_tol, "Quadrature relative tolerance");
    app.add_option("--max-panels", opt.max_panels, "Quadrature panel budget");
    app.add_option("--out", opt.out_dir, "Output directory (default $DEPHASIM_OUT or .)");
    app.add_option("--jobs", opt.jobs, "Worker threads for sweeps (0 = library default)");
    auto* tau_max_opt = app.add_option(
        "--tau-max", opt.tau_max,
        "Largest dimensionless time (default 50 for trace, 200 for scans)");
    app.add_option("--points", opt.points, "Trace grid intervals");

    double x_max = 20.0;
    int conv_n = 2048;
    app.add_option("--x-max", x_max, "Convexity grid upper frequency");
    app.add_option("--n", conv_n, "Convexity grid size");

    double t_min = 0.01, t_max = 20.0;
    int t_points = 25;
    app.add_option("--t-min", t_min, "Temperature sweep: smallest t_tilde");
    app.add_option("--t-max", t_max, "Temperature sweep: largest t_tilde");
    app.add_option("--t-points", t_points, "Temperature sweep: grid size (log-spaced)");

    double s_min = 0.25, s_max = 6.0;
    int s_points = 24;
    app.add_option("--s-min", s_min, "Ohmicity sweep: smallest s");
    app.add_option("--s-max", s_max, "Ohmicity sweep: largest s");
    app.add_option("--s-points", s_points, "Ohmicity sweep: grid size (linear)");

    app.set_config("--config", "", "Flat key=value config file; flags override");

    auto* trace = app.add_subcommand("trace", "Lambda, gamma and capacity on a time grid");
    auto* stationary = app.add_subcommand("stationary", "Stationary coherence");
    auto* sopt = app.add_subcommand("sopt", "Ohmicity maximizing stationary coherence");
    auto* nonmark = app.add_subcommand("nonmark", "Back-flow intervals and N_Q");
    auto* crossover = app.add_subcommand("crossover", "Markovian crossover s*");
    auto* convexity = app.add_subcommand("convexity", "Convexity classification of g");
    auto* sweep_temp = app.add_subcommand("sweep-temp", "s_opt and coherence over t_tilde");
    auto* sweep_s = app.add_subcommand("sweep-s", "Coherence and N_Q over s, both cutoffs");
    std::string which_figure;
    auto* figure = app.add_subcommand("figure", "Reproduce a figure data bundle");
    figure->add_option("name", which_figure, "fig1|fig2|fig3")->required();
    for (CLI::App* sub : {trace, stationary, sopt, nonmark, crossover, convexity,
                          sweep_temp, sweep_s, figure})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // scan-style commands default to a longer horizon than the trace grid
    if (tau_max_opt->count() == 0 && (*nonmark || *sweep_s || *figure))
        opt.tau_max = 200.0;

    try {
        if (opt.jobs > 0) {
#ifdef _OPENMP
            omp_set_num_threads(opt.jobs);
#endif
        }
        if (*trace) run_trace(opt);
        else if (*stationary) run_stationary(opt);
        else if (*sopt) run_sopt(opt);
        else if (*nonmark) run_nonmark(opt);
        else if (*crossover) run_crossover(opt);
        else if (*convexity) run_convexity(opt, x_max, conv_n);
        else if (*sweep_temp) run_sweep_temp(opt, t_min, t_max, t_points);
        else if (*sweep_s) run_sweep_s(opt, s_min, s_max, s_points);
        else if (*figure) run_figure(opt, which_figure);
    } catch (const CLI::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
