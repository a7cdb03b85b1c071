// run.hpp — batch pipelines behind the CLI subcommands: build, diagonalize,
// analyze, persist CSV/JSON artifacts plus a manifest with content hashes.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcchaos/classical.hpp"
#include "tcchaos/config.hpp"
#include "tcchaos/crossover.hpp"
#include "tcchaos/hamiltonian.hpp"
#include "tcchaos/io.hpp"
#include "tcchaos/sff.hpp"
#include "tcchaos/stats.hpp"
#include "tcchaos/svgplot.hpp"
#include "tcchaos/unfolding.hpp"

namespace tcc {

class RunContext {
  public:
    explicit RunContext(const RunConfig& cfg) : cfg_(cfg) {
        std::filesystem::create_directories(cfg.out_dir);
        start_ = std::chrono::steady_clock::now();
    }

    void emit(const std::string& name, const std::string& content) {
        const auto path = std::filesystem::path(cfg_.out_dir) / name;
        io::write_file(path.string(), content);
        outputs_[name] = io::content_hash(content);
    }

    void finish() {
        nlohmann::json m;
        m["command"] = cfg_.command;
        m["model"] = cfg_.model;
        m["seed"] = cfg_.seed;
        m["params"] = cfg_.model == "lattice" ? cfg_.lattice.snapshot()
                                              : cfg_.impurity.snapshot();
        m["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        nlohmann::json files = nlohmann::json::object();
        for (const auto& [name, hash] : outputs_) files[name] = hash;
        m["outputs"] = files;
        if (!cfg_.input.empty()) m["input_hash"] = io::content_hash(io::read_file(cfg_.input));
        const auto path = std::filesystem::path(cfg_.out_dir) / "manifest.json";
        io::write_file(path.string(), m.dump(2) + "\n");
    }

  private:
    RunConfig cfg_;
    std::map<std::string, std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

namespace detail {

inline Spectrum compute_spectrum(const RunConfig& cfg) {
    if (cfg.model == "lattice") {
        auto basis = build_sector_basis(cfg.lattice, cfg.n_ex, cfg.parity);
        return diagonalize(assemble_lattice_hamiltonian(basis));
    }
    auto basis = build_impurity_basis(cfg.impurity);
    return diagonalize(assemble_impurity_hamiltonian(basis));
}

inline Spectrum load_or_compute_spectrum(const RunConfig& cfg) {
    if (!cfg.input.empty()) {
        std::ifstream f(cfg.input);
        if (!f) throw std::runtime_error("cannot open input spectrum " + cfg.input);
        return read_spectrum_csv(f);
    }
    return compute_spectrum(cfg);
}

inline std::string histogram_density_csv(const Histogram& h, double n_samples) {
    std::ostringstream os;
    os << "bin_left,bin_right,density\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double w = h.edges[b + 1] - h.edges[b];
        os << io::format_full(h.edges[b]) << "," << io::format_full(h.edges[b + 1]) << ","
           << io::format_full(h.counts[b] / (n_samples * w)) << "\n";
    }
    return os.str();
}

inline std::string curve_csv(const DiagnosticCurve& c) {
    std::ostringstream os;
    os << "# model=" << c.model << " S=" << c.S
       << " scaling_exponent=" << scaling_exponent(c.scaling) << "\n";
    os << "control,scaled_control,b,b_err,mean_r,r_err,n_levels,ok,error\n";
    const double ex = scaling_exponent(c.scaling);
    for (const auto& p : c.points) {
        os << io::format_full(p.control) << ","
           << io::format_full(p.control * std::pow(c.S, ex)) << "," << io::format_full(p.b)
           << "," << io::format_full(p.b_err) << "," << io::format_full(p.mean_r) << ","
           << io::format_full(p.r_err) << "," << p.n_levels << "," << (p.ok ? 1 : 0) << ","
           << p.error << "\n";
    }
    return os.str();
}

inline DiagnosticCurve read_curve_csv(const std::string& path) {
    DiagnosticCurve c;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open curve file " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line == "control,scaled_control,b,b_err,mean_r,r_err,n_levels,ok,error")
            continue;
        if (line[0] == '#') {
            std::stringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                if (tok.rfind("model=", 0) == 0) c.model = tok.substr(6);
                if (tok.rfind("S=", 0) == 0) c.S = std::stoi(tok.substr(2));
                if (tok.rfind("scaling_exponent=", 0) == 0) {
                    const double e = std::stod(tok.substr(17));
                    c.scaling = e == 0.25 ? ScalingTag::s_quarter
                                : e == 0.75 ? ScalingTag::s_three_quarters
                                            : ScalingTag::none;
                }
            }
            continue;
        }
        auto cols = io::split_csv_line(line);
        if (cols.size() < 8) continue;
        DiagnosticPoint p;
        p.control = std::stod(cols[0]);
        p.b = std::stod(cols[2]);
        p.b_err = std::stod(cols[3]);
        p.mean_r = std::stod(cols[4]);
        p.r_err = std::stod(cols[5]);
        p.n_levels = static_cast<std::size_t>(std::stoul(cols[6]));
        p.ok = cols[7] == "1";
        c.points.push_back(p);
    }
    return c;
}

}  // namespace detail

inline int run_spectrum(const RunConfig& cfg) {
    RunContext ctx(cfg);
    Spectrum spec = detail::compute_spectrum(cfg);
    std::ostringstream os;
    write_spectrum_csv(spec, os);
    ctx.emit("spectrum.csv", os.str());
    ctx.finish();
    return 0;
}

inline int run_unfold(const RunConfig& cfg) {
    RunContext ctx(cfg);
    Spectrum spec = detail::load_or_compute_spectrum(cfg);
    if (cfg.trim_low > 0.0 || cfg.trim_high > 0.0)
        spec = trim_spectrum(spec, cfg.trim_low, cfg.trim_high);
    auto unfolded = unfold(spec, cfg.unfold_degree);
    std::ostringstream os;
    os << "# " << spec.provenance << " | unfold degree=" << cfg.unfold_degree
       << " residual=" << io::format_full(unfolded.residual) << "\n";
    os << "eigenvalue\n";
    for (double v : unfolded.values) os << io::format_full(v) << "\n";
    ctx.emit("unfolded.csv", os.str());
    ctx.emit("dos_raw.csv", detail::histogram_density_csv(
                                dos_histogram(spec.values, cfg.histogram_bins),
                                static_cast<double>(spec.size())));
    ctx.emit("dos_unfolded.csv", detail::histogram_density_csv(
                                     dos_histogram(unfolded.values, cfg.histogram_bins),
                                     static_cast<double>(unfolded.values.size())));
    ctx.finish();
    return 0;
}

inline int run_stats(const RunConfig& cfg) {
    RunContext ctx(cfg);
    Spectrum spec = detail::load_or_compute_spectrum(cfg);
    if (cfg.trim_low > 0.0 || cfg.trim_high > 0.0)
        spec = trim_spectrum(spec, cfg.trim_low, cfg.trim_high);
    auto ratios = gap_ratios(spec);
    auto unfolded = unfold(spec, cfg.unfold_degree);
    auto sp = spacings(unfolded);
    auto fit = fit_brody(sp, cfg.brody_method);

    // p(s): 50 bins on [0, 4]; P(r): 25 bins on [0, 1]
    Histogram hs;
    hs.edges.resize(51);
    hs.counts.assign(50, 0.0);
    for (int k = 0; k <= 50; ++k) hs.edges[static_cast<std::size_t>(k)] = 0.08 * k;
    for (double s : sp)
        if (s < 4.0) hs.counts[static_cast<std::size_t>(s / 0.08)] += 1.0;
    Histogram hr;
    hr.edges.resize(26);
    hr.counts.assign(25, 0.0);
    for (int k = 0; k <= 25; ++k) hr.edges[static_cast<std::size_t>(k)] = 0.04 * k;
    for (double r : ratios.r_values)
        hr.counts[std::min<std::size_t>(static_cast<std::size_t>(r / 0.04), 24)] += 1.0;

    nlohmann::json rep;
    rep["params"] = cfg.model == "lattice" ? cfg.lattice.snapshot() : cfg.impurity.snapshot();
    rep["n_levels_used"] = spec.size();
    rep["b"] = fit.b;
    rep["b_stderr"] = fit.b_stderr;
    rep["b_method"] = cfg.brody_method == BrodyMethod::mle ? "mle" : "histogram_lsq";
    rep["mean_r"] = ratios.mean_r;
    rep["r_stderr"] = ratios.stderr_r;
    rep["skipped_degenerate_gaps"] = ratios.skipped_degenerate;
    rep["unfold_residual"] = unfolded.residual;
    ctx.emit("stats.json", rep.dump(2) + "\n");
    ctx.emit("p_s_hist.csv",
             detail::histogram_density_csv(hs, static_cast<double>(sp.size())));
    ctx.emit("p_r_hist.csv",
             detail::histogram_density_csv(hr, static_cast<double>(ratios.r_values.size())));
    ctx.finish();
    return 0;
}

inline int run_sff(const RunConfig& cfg) {
    RunContext ctx(cfg);
    Spectrum spec = detail::load_or_compute_spectrum(cfg);
    if (cfg.trim_low > 0.0 || cfg.trim_high > 0.0)
        spec = trim_spectrum(spec, cfg.trim_low, cfg.trim_high);
    auto unfolded = unfold(spec, cfg.unfold_degree);
    auto curve = sff(unfolded, cfg.sff_block_size,
                     log_time_grid(cfg.sff_t_min, cfg.sff_t_max, cfg.sff_points));
    std::ostringstream os;
    os << "t,K_measured,K_goe,K_poisson,n_blocks,block_size\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i)
        os << io::format_full(curve.times[i]) << "," << io::format_full(curve.values[i]) << ","
           << io::format_full(curve.goe_ref[i]) << "," << io::format_full(curve.poisson_ref[i])
           << "," << curve.n_blocks << "," << curve.block_size << "\n";
    ctx.emit("sff.csv", os.str());
    ctx.finish();
    return 0;
}

inline int run_sweep(const RunConfig& cfg) {
    RunContext ctx(cfg);
    if (cfg.sweep_grid.empty()) throw ConfigError("sweep: sweep_grid is required");
    SweepOptions opt;
    opt.trim_low = cfg.trim_low;
    opt.trim_high = cfg.trim_high;
    opt.unfold_degree = cfg.unfold_degree;
    opt.brody_method = cfg.brody_method;
    opt.workers = cfg.workers;
    DiagnosticCurve curve =
        cfg.model == "lattice"
            ? sweep_lattice(cfg.lattice, cfg.n_ex, cfg.parity, cfg.sweep_grid, opt)
            : sweep_impurity(cfg.impurity, cfg.sweep_grid, opt);
    ctx.emit("curve.csv", detail::curve_csv(curve));
    ctx.finish();
    return 0;
}

inline int run_map(const RunConfig& cfg) {
    RunContext ctx(cfg);
    if (cfg.input_lattice.empty() || cfg.input_impurity.empty())
        throw ConfigError("map: input_lattice and input_impurity are required");
    auto latc = detail::read_curve_csv(cfg.input_lattice);
    auto impc = detail::read_curve_csv(cfg.input_impurity);
    for (bool use_b : {false, true}) {
        auto map = extract_map(latc, impc, use_b);
        std::ostringstream os;
        os << "j_over_lambda,mu,band_low,band_high,diagnostic\n";
        for (std::size_t i = 0; i < map.mu.size(); ++i)
            os << io::format_full(map.j_over_lambda[i]) << "," << io::format_full(map.mu[i])
               << "," << io::format_full(map.band_low[i]) << ","
               << io::format_full(map.band_high[i]) << "," << (use_b ? "b" : "r") << "\n";
        ctx.emit(use_b ? "map_b.csv" : "map_r.csv", os.str());
    }
    ctx.finish();
    return 0;
}

inline int run_poincare(const RunConfig& cfg) {
    RunContext ctx(cfg);
    auto section = poincare_section(cfg.impurity, cfg.energy, cfg.n_seeds, cfg.n_crossings,
                                    cfg.seed, cfg.t_max, cfg.ode_tol);
    std::ostringstream os;
    os << "trajectory_id,crossing_index,x_c,p_c,t_cross\n";
    for (const auto& q : section.points)
        os << q.trajectory_id << "," << q.crossing_index << "," << io::format_full(q.xc) << ","
           << io::format_full(q.pc) << "," << io::format_full(q.t_cross) << "\n";
    ctx.emit("section.csv", os.str());
    nlohmann::json meta;
    meta["energy"] = section.energy;
    meta["mu"] = cfg.impurity.mu;
    meta["lambda"] = cfg.impurity.lambda;
    meta["ode_tol"] = cfg.ode_tol;
    meta["crossing_tol"] = section.tol;
    meta["seed"] = cfg.seed;
    meta["n_seeds"] = cfg.n_seeds;
    meta["truncated_trajectories"] = section.truncated_trajectories;
    meta["dimension_proxy"] = section_dimension_proxy(section);
    ctx.emit("section_meta.json", meta.dump(2) + "\n");
    ctx.finish();
    return 0;
}

// Figure analogues rendered from previously produced CSVs in out_dir.
inline int run_plot(const RunConfig& cfg) {
    RunContext ctx(cfg);
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    auto read_csv = [](const fs::path& p) {
        std::vector<std::vector<double>> cols;
        std::ifstream f(p);
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
            auto toks = io::split_csv_line(line);
            if (cols.empty()) cols.resize(toks.size());
            for (std::size_t i = 0; i < toks.size() && i < cols.size(); ++i) {
                try {
                    cols[i].push_back(std::stod(toks[i]));
                } catch (...) {
                    cols[i].push_back(std::numeric_limits<double>::quiet_NaN());
                }
            }
        }
        return cols;
    };
    bool any = false;
    if (fs::exists(dir / "p_s_hist.csv")) {
        auto cols = read_csv(dir / "p_s_hist.csv");
        svg::Plot plot("level spacing distribution", "s", "p(s)");
        svg::Series hist;
        for (std::size_t i = 0; i < cols[0].size(); ++i) {
            hist.x.push_back(0.5 * (cols[0][i] + cols[1][i]));
            hist.y.push_back(cols[2][i]);
        }
        hist.label = "data";
        plot.add(hist);
        svg::Series poisson, goe;
        for (double s = 0.0; s <= 4.0; s += 0.02) {
            poisson.x.push_back(s);
            poisson.y.push_back(reference_spacing_pdf(Ensemble::poisson, s));
            goe.x.push_back(s);
            goe.y.push_back(reference_spacing_pdf(Ensemble::goe, s));
        }
        poisson.color = "#2ca02c";
        poisson.dash = "4,3";
        poisson.label = "Poisson";
        goe.color = "#d62728";
        goe.dash = "4,3";
        goe.label = "GOE";
        plot.add(poisson);
        plot.add(goe);
        ctx.emit("p_s.svg", plot.render());
        any = true;
    }
    if (fs::exists(dir / "curve.csv")) {
        auto cols = read_csv(dir / "curve.csv");
        svg::Plot plot("adjacent gap ratio crossover", "scaled control", "<r>");
        svg::Series r;
        for (std::size_t i = 0; i < cols[0].size(); ++i) {
            r.x.push_back(cols[1][i]);
            r.y.push_back(cols[4][i]);
        }
        r.scatter = true;
        r.label = "<r>";
        plot.add(r);
        svg::Series pref, gref;
        pref.x = {r.x.front(), r.x.back()};
        pref.y = {0.386, 0.386};
        pref.dash = "4,3";
        pref.color = "#2ca02c";
        pref.label = "Poisson 0.386";
        gref.x = pref.x;
        gref.y = {0.536, 0.536};
        gref.dash = "4,3";
        gref.color = "#d62728";
        gref.label = "GOE 0.536";
        plot.add(pref);
        plot.add(gref);
        ctx.emit("gap_ratio.svg", plot.render());
        any = true;
    }
    if (fs::exists(dir / "sff.csv")) {
        auto cols = read_csv(dir / "sff.csv");
        svg::Plot plot("spectral form factor", "t", "K(t)", true, true);
        svg::Series k, g, pz;
        k.x = cols[0];
        k.y = cols[1];
        k.label = "measured";
        g.x = cols[0];
        g.y = cols[2];
        g.dash = "4,3";
        g.color = "#d62728";
        g.label = "GOE";
        pz.x = cols[0];
        pz.y = cols[3];
        pz.dash = "2,3";
        pz.color = "#2ca02c";
        pz.label = "Poisson";
        plot.add(k);
        plot.add(g);
        plot.add(pz);
        ctx.emit("sff.svg", plot.render());
        any = true;
    }
    if (fs::exists(dir / "dos_raw.csv") && fs::exists(dir / "dos_unfolded.csv")) {
        for (const char* name : {"dos_raw", "dos_unfolded"}) {
            auto cols = read_csv(dir / (std::string(name) + ".csv"));
            svg::Plot plot(std::string("density of states (") + name + ")", "E", "DOS");
            svg::Series h;
            for (std::size_t i = 0; i < cols[0].size(); ++i) {
                h.x.push_back(0.5 * (cols[0][i] + cols[1][i]));
                h.y.push_back(cols[2][i]);
            }
            plot.add(h);
            ctx.emit(std::string(name) + ".svg", plot.render());
        }
        any = true;
    }
    if (fs::exists(dir / "section.csv")) {
        auto cols = read_csv(dir / "section.csv");
        svg::Plot plot("Poincare section", "x_c", "p_c");
        svg::Series pts;
        pts.x = cols[2];
        pts.y = cols[3];
        pts.scatter = true;
        pts.marker = 1.2;
        plot.add(pts);
        ctx.emit("section.svg", plot.render());
        any = true;
    }
    if (fs::exists(dir / "map_r.csv")) {
        svg::Plot plot("lattice-impurity map", "J/lambda", "mu");
        const char* files[] = {"map_r.csv", "map_b.csv"};
        const char* colors[] = {"#1f77b4", "#d62728"};
        for (int i = 0; i < 2; ++i) {
            if (!fs::exists(dir / files[i])) continue;
            auto cols = read_csv(dir / files[i]);
            svg::Series m;
            m.x = cols[0];
            m.y = cols[1];
            m.color = colors[i];
            m.label = i == 0 ? "via <r>" : "via b";
            plot.add(m);
        }
        ctx.emit("map.svg", plot.render());
        any = true;
    }
    if (!any) throw std::runtime_error("plot: no known artifact CSVs found in " + cfg.out_dir);
    ctx.finish();
    return 0;
}

inline int run(const RunConfig& cfg) {
    if (cfg.command == "spectrum") return run_spectrum(cfg);
    if (cfg.command == "unfold") return run_unfold(cfg);
    if (cfg.command == "stats") return run_stats(cfg);
    if (cfg.command == "sff") return run_sff(cfg);
    if (cfg.command == "sweep") return run_sweep(cfg);
    if (cfg.command == "map") return run_map(cfg);
    if (cfg.command == "poincare") return run_poincare(cfg);
    if (cfg.command == "plot") return run_plot(cfg);
    throw ConfigError("run: unknown command '" + cfg.command + "'");
}

}  // namespace tcc
