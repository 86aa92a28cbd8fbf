// polarscale: command-line front end for the scaling-exponent toolkit.
//
// Data goes to stdout or to files under the output directory; progress and
// warnings go to stderr. Exit codes: 0 ok, 1 computation failed, 2 usage error.

#include <polarscale/polarscale.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
namespace ps = polarscale;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComputationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    unsigned threads = 1;
    std::string out_dir;
    bool quiet = false;
};

Globals g;

void progress(const std::string& s)
{
    if (!g.quiet)
        std::cerr << s << '\n';
}

fs::path out_path(const std::string& name)
{
    fs::path p(name);
    if (p.is_absolute())
        return p;
    fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
    fs::create_directories(dir);
    return dir / p;
}

std::ofstream open_out(const fs::path& p)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream os(p);
    if (!os)
        throw ComputationFailed("cannot open " + p.string() + " for writing");
    return os;
}

ps::Rational rational_arg(const std::string& text, const char* what)
{
    ps::ParsedRational r;
    try {
        r = ps::parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
    if (r.from_decimal)
        std::cerr << "warning: " << what << " " << text << " taken as " << ps::to_string(r.value) << '\n';
    return r.value;
}

// Exact fraction alongside its decimal rendering.
ojson dual(const ps::Rational& q)
{
    ojson j;
    j["exact"] = ps::to_string(q);
    j["decimal"] = ps::to_double(q);
    return j;
}

std::string dual_text(const ps::Rational& q, int digits = 7) { return ps::to_string(q) + " (" + ps::to_decimal(q, digits) + ")"; }

// Finite doubles stay numbers; anything outside double range becomes a string.
ojson big(const ps::BigFloat& v)
{
    double d = v.to_double();
    if (std::isfinite(d) && (d == 0 || std::fabs(d) > 1e-300))
        return d;
    return v.str(17);
}

ps::ChannelOperator operator_arg(const std::string& s)
{
    try {
        return ps::parse_operator(s);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------- iterate

struct IterateOpts {
    std::string op = "bmsc";
    std::size_t grid = 1000, inner = 100, steps = 100;
    std::string init;
    std::string trace = "rhat_trace.csv", samples = "eigenfunction.csv", plot = "rhat_trace.svg";
};

int run_iterate(const IterateOpts& o)
{
    ps::IterationConfig c;
    c.op = operator_arg(o.op);
    c.grid_size = o.grid;
    c.inner_size = o.inner;
    c.steps = o.steps;
    c.threads = g.threads;
    c.init_exponent = o.init.empty() ? (c.op == ps::ChannelOperator::bec ? ps::make_rational(2, 3) : ps::make_rational(3, 4))
                                     : rational_arg(o.init, "--init-exponent");
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    auto res = ps::iterate<double>(c, [](std::size_t k, double r) {
        if (k % 10 == 0)
            progress("step " + std::to_string(k) + " rhat=" + std::to_string(r));
    });
    auto tp = out_path(o.trace), sp = out_path(o.samples);
    {
        auto os = open_out(tp);
        ps::write_trace_csv(os, res.rhat);
    }
    {
        auto os = open_out(sp);
        ps::write_samples_csv(os, res.h);
    }
    ojson j;
    j["operator"] = std::string(ps::to_string(c.op));
    j["grid_size"] = c.grid_size;
    j["inner_size"] = c.inner_size;
    j["steps"] = c.steps;
    j["init_exponent"] = dual(c.init_exponent);
    j["rhat_final"] = res.rhat.back();
    j["trace_csv"] = tp.string();
    j["samples_csv"] = sp.string();
    if (!o.plot.empty()) {
        ps::PlotSeries s{"rhat", {}, {}};
        for (std::size_t k = 0; k < res.rhat.size(); ++k) {
            s.x.push_back(static_cast<double>(k + 1));
            s.y.push_back(res.rhat[k]);
        }
        auto pp = out_path(o.plot);
        auto os = open_out(pp);
        ps::write_svg_plot(os, {"ratio sequence", "k", "rhat_k"}, {s});
        j["plot"] = pp.string();
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- certify

struct CertifyOpts {
    std::string op = "bmsc", preset = "desk";
    std::size_t grid = 0, inner = 0, steps = 0;
    std::string eta, delta_s;
    std::uint64_t mbar = 0;
    unsigned long precision_bits = 128;
    std::uint64_t mu_max_den = 1000;
    std::string transcript, candidate;
    bool full_transcript = false;
};

int run_certify(const CertifyOpts& o)
{
    ps::ChannelOperator op = operator_arg(o.op);
    ps::CertifyRun run;
    try {
        run = ps::preset_run(o.preset, op);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (o.grid)
        run.iteration.grid_size = o.grid;
    if (o.inner)
        run.iteration.inner_size = o.inner;
    if (o.steps)
        run.iteration.steps = o.steps;
    if (!o.eta.empty())
        run.candidate.eta = rational_arg(o.eta, "--eta");
    if (!o.delta_s.empty())
        run.candidate.delta_s = rational_arg(o.delta_s, "--delta-s");
    if (o.mbar)
        run.candidate.mbar = o.mbar;
    try {
        run.iteration.validate();
        run.candidate.validate(run.iteration.grid_size);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    ps::CertifyOptions opt;
    opt.precision_bits = o.precision_bits;
    opt.mu_max_den = o.mu_max_den;
    opt.full_transcript = o.full_transcript;
    opt.threads = g.threads;

    ps::Transcript t;
    ps::PipelineResult res = ps::run_certification(run, opt, &t, progress);
    if (!o.candidate.empty()) {
        auto cp = out_path(o.candidate);
        auto os = open_out(cp);
        ps::write_candidate_csv(os, res.candidate);
    }
    std::string tname = o.transcript.empty() ? "certify_" + o.op + "_" + o.preset + ".transcript" : o.transcript;
    auto tp = out_path(tname);
    {
        auto os = open_out(tp);
        t.write(os);
    }
    const auto& b = res.bound;
    std::cout << "operator: " << o.op << ", preset: " << o.preset << ", N_s=" << run.iteration.grid_size
              << ", M_s=" << run.iteration.inner_size << '\n';
    std::cout << "rhat_final: " << res.final_rhat << '\n';
    std::cout << "candidate points: " << res.candidate.size() << '\n';
    if (b.h0 != 0 || b.h1 != 0) {
        std::cout << "H0 <= " << dual_text(b.h0, 10) << '\n';
        std::cout << "H1 <= " << dual_text(b.h1, 10) << '\n';
        std::cout << "middle <= " << dual_text(b.middle_max, 10) << '\n';
        std::cout << "sup r <= " << dual_text(b.sup_bound, 10) << '\n';
    }
    std::cout << "transcript: " << tp.string() << " (" << t.assertions() << " assertions)\n";
    if (!b.success) {
        std::cout << "certification failed: " << b.diagnostic << '\n';
        return 1;
    }
    std::cout << "mu <= " << dual_text(*b.mu, 6) << '\n';
    return 0;
}

// ------------------------------------------------------- verify-transcript

int run_verify(const std::string& file)
{
    std::ifstream in(file);
    if (!in)
        throw UsageError("cannot open transcript " + file);
    auto rep = ps::replay::verify(in);
    std::cout << "assertions: " << rep.assertions << '\n';
    std::cout << "failures: " << rep.failures.size() << '\n';
    for (std::size_t i = 0; i < rep.failures.size() && i < 20; ++i)
        std::cout << "  line " << rep.failures[i].line << ": " << rep.failures[i].reason << '\n';
    std::cout << "result: " << (rep.ok() ? "PASS" : "FAIL") << '\n';
    return rep.ok() ? 0 : 1;
}

// --------------------------------------------------------------- constants

struct ConstantsOpts {
    std::string op = "bec", preset = "desk";
    std::string candidate, sup, mu, pe = "1/1000";
};

int run_constants(const ConstantsOpts& o)
{
    ps::ChannelOperator op = operator_arg(o.op);
    ps::CandidateFunction cand;
    if (!o.candidate.empty()) {
        std::ifstream in(o.candidate);
        if (!in)
            throw UsageError("cannot open candidate " + o.candidate);
        cand = ps::read_candidate_csv(in);
    } else {
        ps::CertifyRun run;
        try {
            run = ps::preset_run(o.preset, op);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        run.iteration.threads = g.threads;
        progress("iterating " + o.op + " preset " + o.preset);
        auto it = ps::iterate<double>(run.iteration);
        cand = ps::build_candidate(it.h, run.candidate);
    }
    ps::Rational sup;
    std::optional<ps::Rational> mu;
    if (!o.sup.empty()) {
        sup = rational_arg(o.sup, "--sup");
    } else {
        progress("certifying the candidate");
        ps::CertifyOptions opt;
        opt.threads = g.threads;
        auto b = ps::certify(cand, op, opt);
        if (!b.success)
            throw ComputationFailed("certification failed: " + b.diagnostic);
        sup = b.sup_bound;
        mu = b.mu;
    }
    if (!o.mu.empty())
        mu = rational_arg(o.mu, "--mu");
    if (!mu)
        mu = ps::smallest_certified_mu(sup, 1000);
    if (!mu)
        throw ComputationFailed("no mu with denominator <= 1000 satisfies the hypothesis");
    ps::Rational pe = rational_arg(o.pe, "--pe");
    ps::ChainConstants k;
    try {
        k = ps::chain_constants(*mu, sup, cand, ps::BigFloat(pe, MPFR_RNDN, ps::kChainBits));
    } catch (const std::domain_error& e) {
        throw ComputationFailed(e.what());
    }
    ojson j;
    j["mu"] = dual(*mu);
    j["sup_ratio"] = dual(sup);
    j["pe"] = dual(pe);
    j["rho1"] = big(k.rho1);
    j["alpha"] = big(k.alpha);
    j["delta"] = big(k.delta);
    j["c3"] = big(k.c3);
    j["eps1"] = big(k.eps1);
    j["eps2"] = big(k.eps2);
    j["rho"] = big(k.rho);
    j["c1"] = big(k.c1);
    j["c2"] = big(k.c2);
    j["beta1"] = big(k.beta1);
    j["identity_residual"] = big(k.identity_residual());
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- tradeoff

struct TradeoffOpts {
    std::string mu = "4.714";
    std::string grid = "0.3:0.95:0.05";
    std::string output, plot;
};

int run_tradeoff(const TradeoffOpts& o)
{
    double mu = ps::to_double(rational_arg(o.mu, "--mu"));
    double a, b, step;
    {
        std::vector<std::string> parts;
        std::stringstream ss(o.grid);
        for (std::string p; std::getline(ss, p, ':');)
            parts.push_back(p);
        if (parts.size() != 3)
            throw UsageError("--gamma-grid expects start:stop:step");
        try {
            a = std::stod(parts[0]);
            b = std::stod(parts[1]);
            step = std::stod(parts[2]);
        } catch (const std::exception&) {
            throw UsageError("--gamma-grid expects numbers");
        }
        if (!(step > 0) || b < a)
            throw UsageError("--gamma-grid needs step > 0 and stop >= start");
    }
    std::vector<ps::TradeoffPoint> pts;
    const double lo = ps::tradeoff_lower_gamma(mu);
    const std::size_t count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        double gamma = std::round((a + step * static_cast<double>(i)) * 1e12) / 1e12;
        if (!(gamma > lo && gamma < 1)) {
            std::cerr << "warning: gamma " << gamma << " outside (" << lo << ", 1), skipped\n";
            continue;
        }
        pts.push_back(ps::tradeoff_point(gamma, mu));
    }
    if (o.output.empty()) {
        ps::write_tradeoff_csv(std::cout, pts);
    } else {
        auto p = out_path(o.output);
        auto os = open_out(p);
        ps::write_tradeoff_csv(os, pts);
        progress("wrote " + p.string());
    }
    if (!o.plot.empty()) {
        ps::PlotSeries s{"mu = " + o.mu, {}, {}};
        for (const auto& p : pts) {
            s.x.push_back(p.gap_exponent);
            s.y.push_back(p.pe_exponent);
        }
        auto pp = out_path(o.plot);
        auto os = open_out(pp);
        ps::write_svg_plot(os, {"moderate-deviations trade-off", "gap exponent mu/(1-gamma)", "error exponent"}, {s});
    }
    return 0;
}

// ------------------------------------------------------------ floor-verify

struct FloorVerifyOpts {
    std::string z = "1/4", zprime = "1/2";
    unsigned n = 10;
    bool grid16 = false;
    std::uint64_t k = 0;
};

ojson floor_json(const ps::FloorReport& r)
{
    ojson j;
    j["z"] = dual(r.z);
    j["zprime"] = dual(r.zp);
    j["n_max"] = r.n_max;
    j["checked"] = r.checked;
    j["exact_equalities"] = r.equalities;
    j["violations"] = r.violations;
    j["undecided"] = r.undecided;
    return j;
}

int run_floor_verify(const FloorVerifyOpts& o)
{
    if (o.n > 14)
        throw UsageError("--n must be at most 14");
    ojson j;
    bool ok = true;
    if (o.grid16) {
        std::uint64_t checked = 0, viol = 0, und = 0, pairs = 0;
        ojson bad = ojson::array();
        for (long a = 1; a <= 15; ++a)
            for (long b = a; b <= 15; ++b) {
                auto r = ps::verify_floor_bec(ps::make_rational(a, 16), ps::make_rational(b, 16), o.n);
                ++pairs;
                checked += r.checked;
                viol += r.violations;
                und += r.undecided;
                if (!r.ok())
                    bad.push_back(floor_json(r));
            }
        progress("checked " + std::to_string(pairs) + " pairs");
        j["pairs"] = pairs;
        j["n_max"] = o.n;
        j["checked"] = checked;
        j["violations"] = viol;
        j["undecided"] = und;
        j["failing_pairs"] = bad;
        ok = viol == 0 && und == 0;
    } else {
        ps::Rational z = rational_arg(o.z, "--z"), zp = rational_arg(o.zprime, "--zprime");
        if (!(z > 0 && z <= zp && zp < 1))
            throw UsageError("need 0 < z <= zprime < 1");
        auto r = ps::verify_floor_bec(z, zp, o.n);
        j["floor"] = floor_json(r);
        ok = r.ok();
        if (o.k) {
            if (o.k > (std::uint64_t{1} << o.n))
                throw UsageError("--k exceeds the block length");
            auto code = ps::construct_polar_code(zp, o.n, o.k);
            auto c = ps::verify_corollary_bec(code, z);
            ojson cj;
            cj["info_size"] = c.info_size;
            cj["pe_tilde_z"] = dual(c.pe_w);
            cj["pe_tilde_zprime"] = dual(c.pe_wp);
            cj["verdict"] = c.verdict == ps::Verdict::holds ? "holds" : c.verdict == ps::Verdict::violated ? "violated" : "undecided";
            cj["log2_margin"] = c.log_margin;
            j["union_bound"] = cj;
            ok = ok && c.verdict == ps::Verdict::holds;
        }
    }
    j["result"] = ok ? "PASS" : "FAIL";
    std::cout << j.dump(2) << '\n';
    return ok ? 0 : 1;
}

// ------------------------------------------------------------- floor-sweep

struct FloorSweepOpts {
    unsigned n = 10;
    std::uint64_t k = 0;
    std::string zprime = "1/2", zmin = "1/20", zmax = "1/2";
    std::size_t points = 46;
    std::string output = "floor_sweep.csv", plot = "floor_sweep.svg";
};

int run_floor_sweep(const FloorSweepOpts& o)
{
    if (o.n > 14)
        throw UsageError("--n must be at most 14");
    if (o.points < 2)
        throw UsageError("--points must be at least 2");
    std::uint64_t k = o.k ? o.k : (std::uint64_t{1} << o.n) / 2;
    ps::Rational zp = rational_arg(o.zprime, "--zprime"), lo = rational_arg(o.zmin, "--zmin"),
                 hi = rational_arg(o.zmax, "--zmax");
    if (!(lo > 0 && lo < hi && hi <= zp && zp < 1))
        throw UsageError("need 0 < zmin < zmax <= zprime < 1");
    auto code = ps::construct_polar_code(zp, o.n, k);
    std::vector<ps::Rational> grid;
    for (std::size_t i = 0; i < o.points; ++i)
        grid.push_back(lo + (hi - lo) * ps::make_rational(static_cast<long>(i), static_cast<long>(o.points - 1)));
    auto r = ps::floor_sweep(code, grid);
    auto cp = out_path(o.output);
    {
        auto os = open_out(cp);
        ps::write_sweep_csv(os, r);
    }
    ojson j;
    j["n"] = o.n;
    j["k"] = k;
    j["zprime"] = dual(zp);
    j["points"] = r.points.size();
    j["min_log_slope"] = r.min_slope;
    j["reference_exponent"] = r.reference_exponent;
    j["pe_tilde_zprime"] = ps::to_double(ps::union_bound_pe(code));
    j["monotone"] = r.monotone;
    j["csv"] = cp.string();
    if (!o.plot.empty()) {
        ps::PlotSeries s{"union bound", {}, {}};
        for (const auto& p : r.points) {
            s.x.push_back(ps::to_double(p.z));
            s.y.push_back(ps::to_double(p.pe_tilde));
        }
        auto pp = out_path(o.plot);
        auto os = open_out(pp);
        ps::write_svg_plot(os, {"union bound on a fixed code", "z", "sum of Z_i over information set", true, true}, {s});
        j["plot"] = pp.string();
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string z = "1/2", design;
    unsigned n = 4;
    std::uint64_t k = 1;
    std::uint64_t trials = 100000, seed = 1;
    std::string bits;
};

int run_simulate(const SimulateOpts& o)
{
    if (o.n > 20)
        throw UsageError("--n must be at most 20");
    ps::Rational z = rational_arg(o.z, "--z");
    ps::Rational design = o.design.empty() ? z : rational_arg(o.design, "--design");
    if (z < 0 || z > 1 || design < 0 || design > 1)
        throw UsageError("erasure probabilities must lie in [0,1]");
    if (o.k > (std::uint64_t{1} << o.n))
        throw UsageError("--k exceeds the block length");
    if (o.trials < 1)
        throw UsageError("--trials must be at least 1");
    ps::SimConfig cfg{ps::construct_polar_code(design, o.n, o.k), z, o.trials, o.seed, g.threads};
    auto r = ps::simulate(cfg);
    ojson j;
    j["n"] = o.n;
    j["k"] = o.k;
    j["z"] = dual(z);
    j["trials"] = r.trials;
    j["errors"] = r.errors;
    j["estimate"] = r.estimate;
    j["ci_lo"] = r.ci.lo;
    j["ci_hi"] = r.ci.hi;
    j["union_bound"] = dual(ps::union_bound_pe(cfg.code, z));
    j["seed"] = r.seed;
    j["generator_id"] = ps::kGeneratorId;
    if (!o.bits.empty()) {
        auto p = out_path(o.bits);
        auto os = open_out(p);
        auto exact = ps::synthetic_values_bec(z, o.n);
        ps::csv_row(os, {"index", "failures", "frequency", "z_exact"});
        for (std::size_t i = 0; i < r.bit_failures.size(); ++i)
            ps::csv_row(os, {std::to_string(i + 1), std::to_string(r.bit_failures[i]),
                             std::to_string(static_cast<double>(r.bit_failures[i]) / static_cast<double>(r.trials)),
                             ps::to_string(exact[i])});
        j["bit_csv"] = p.string();
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// --------------------------------------------------------------- enumerate

struct EnumerateOpts {
    std::string z = "1/2";
    unsigned n = 2;
    std::string output;
};

int run_enumerate(const EnumerateOpts& o)
{
    if (o.n > ps::kExactDepthCap)
        throw UsageError("--n must be at most " + std::to_string(ps::kExactDepthCap));
    ps::Rational z = rational_arg(o.z, "--z");
    if (z < 0 || z > 1)
        throw UsageError("--z must lie in [0,1]");
    if (o.output.empty()) {
        ps::write_synthetic_csv(std::cout, z, o.n);
    } else {
        auto p = out_path(o.output);
        auto os = open_out(p);
        ps::write_synthetic_csv(os, z, o.n);
        progress("wrote " + p.string());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified bounds on the scaling exponent of polar codes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option values; unknown keys are rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    if (const char* env = std::getenv("POLARSCALE_OUT_DIR"))
        g.out_dir = env;
    app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for output files (default: $POLARSCALE_OUT_DIR or .)");
    app.add_flag("--quiet", g.quiet, "suppress progress messages");

    IterateOpts io;
    auto* it = app.add_subcommand("iterate", "power-iterate the sampled operator");
    it->add_option("--operator", io.op, "bec or bmsc")->capture_default_str();
    it->add_option("--grid", io.grid, "N_s")->capture_default_str();
    it->add_option("--inner", io.inner, "M_s")->capture_default_str();
    it->add_option("--steps", io.steps, "k")->capture_default_str();
    it->add_option("--init-exponent", io.init, "exponent of (x(1-x))^e, default 3/4 (bmsc), 2/3 (bec)");
    it->add_option("--trace", io.trace, "rhat trace CSV")->capture_default_str();
    it->add_option("--samples", io.samples, "final eigenfunction CSV")->capture_default_str();
    it->add_option("--plot", io.plot, "SVG of the trace (empty: none)")->capture_default_str();

    CertifyOpts co;
    auto* ce = app.add_subcommand("certify", "certify sup r < 1 and the scaling exponent");
    ce->add_option("--operator", co.op, "bec or bmsc")->capture_default_str();
    ce->add_option("--preset", co.preset, "paper (N_s=1e6, M_s=1e4) or desk (N_s=1e5, M_s=1e3)")->capture_default_str();
    ce->add_option("--grid", co.grid, "override N_s");
    ce->add_option("--inner", co.inner, "override M_s");
    ce->add_option("--steps", co.steps, "override k");
    ce->add_option("--eta", co.eta, "tail exponent, default 78/100 (bmsc), 72/100 (bec)");
    ce->add_option("--mbar", co.mbar, "tail junction index, default 13 (bmsc), 5 (bec)");
    ce->add_option("--delta-s", co.delta_s, "adjacent-sample ratio tolerance, default 1/10000");
    ce->add_option("--precision-bits", co.precision_bits, "bits of the power enclosures")->capture_default_str();
    ce->add_option("--mu-max-den", co.mu_max_den, "largest denominator in the mu search")->capture_default_str();
    ce->add_option("--transcript", co.transcript, "transcript file (default certify_<op>_<preset>.transcript)");
    ce->add_option("--save-candidate", co.candidate, "also write the snapped candidate CSV");
    ce->add_flag("--full-transcript", co.full_transcript, "one assertion per middle interval");

    std::string vt_file;
    auto* vt = app.add_subcommand("verify-transcript", "replay a transcript with integer arithmetic");
    vt->add_option("file", vt_file, "transcript")->required();

    ConstantsOpts ko;
    auto* ks = app.add_subcommand("constants", "proof constants for a certified candidate");
    ks->add_option("--operator", ko.op, "bec or bmsc")->capture_default_str();
    ks->add_option("--preset", ko.preset, "preset used when no candidate file is given")->capture_default_str();
    ks->add_option("--candidate", ko.candidate, "candidate CSV written by certify --save-candidate");
    ks->add_option("--sup", ko.sup, "certified sup ratio (skips re-certification)");
    ks->add_option("--mu", ko.mu, "scaling exponent (default: smallest certified)");
    ks->add_option("--pe", ko.pe, "target error probability")->capture_default_str();

    TradeoffOpts to;
    auto* tr = app.add_subcommand("tradeoff", "moderate-deviations exponents");
    tr->add_option("--mu", to.mu, "scaling exponent")->capture_default_str();
    tr->add_option("--gamma-grid", to.grid, "start:stop:step")->capture_default_str();
    tr->add_option("--output", to.output, "CSV file (default: stdout)");
    tr->add_option("--plot", to.plot, "SVG of the trade-off curve");

    FloorVerifyOpts fv;
    auto* fvc = app.add_subcommand("floor-verify", "exhaustive check of the error-floor inequality on the BEC");
    fvc->add_option("--z", fv.z, "erasure probability of W")->capture_default_str();
    fvc->add_option("--zprime", fv.zprime, "erasure probability of W'")->capture_default_str();
    fvc->add_option("--n", fv.n, "largest depth (<= 14)")->capture_default_str();
    fvc->add_option("--k", fv.k, "also check the union bound for a code with k information bits designed at zprime");
    fvc->add_flag("--grid16", fv.grid16, "all pairs z <= z' on {1/16, ..., 15/16}");

    FloorSweepOpts fs_;
    auto* fsw = app.add_subcommand("floor-sweep", "union bound of a fixed code across channel qualities");
    fsw->add_option("--n", fs_.n, "log2 block length")->capture_default_str();
    fsw->add_option("--k", fs_.k, "information bits (default: half)");
    fsw->add_option("--zprime", fs_.zprime, "design erasure probability")->capture_default_str();
    fsw->add_option("--zmin", fs_.zmin, "smallest z")->capture_default_str();
    fsw->add_option("--zmax", fs_.zmax, "largest z")->capture_default_str();
    fsw->add_option("--points", fs_.points, "grid points")->capture_default_str();
    fsw->add_option("--output", fs_.output, "CSV file")->capture_default_str();
    fsw->add_option("--plot", fs_.plot, "log-log SVG (empty: none)")->capture_default_str();

    SimulateOpts so;
    auto* si = app.add_subcommand("simulate", "Monte Carlo SC decoding on the BEC");
    si->add_option("--z", so.z, "channel erasure probability")->capture_default_str();
    si->add_option("--design", so.design, "design erasure probability (default: --z)");
    si->add_option("--n", so.n, "log2 block length")->capture_default_str();
    si->add_option("--k", so.k, "information bits")->capture_default_str();
    si->add_option("--trials", so.trials, "number of blocks")->capture_default_str();
    si->add_option("--seed", so.seed, "generator seed")->capture_default_str();
    si->add_option("--bit-csv", so.bits, "per-bit failure frequencies");

    EnumerateOpts eo;
    auto* en = app.add_subcommand("enumerate", "exact synthetic erasure probabilities as CSV");
    en->add_option("--z", eo.z, "erasure probability")->capture_default_str();
    en->add_option("--n", eo.n, "depth")->capture_default_str();
    en->add_option("--output", eo.output, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*it)
            return run_iterate(io);
        if (*ce)
            return run_certify(co);
        if (*vt)
            return run_verify(vt_file);
        if (*ks)
            return run_constants(ko);
        if (*tr)
            return run_tradeoff(to);
        if (*fvc)
            return run_floor_verify(fv);
        if (*fsw)
            return run_floor_sweep(fs_);
        if (*si)
            return run_simulate(so);
        if (*en)
            return run_enumerate(eo);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
