// Acceptance checks. Each invocation runs one criterion, prints a single
// "criterion X: PASS|FAIL ..." line and exits non-zero on FAIL.

#include <polarscale/polarscale.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace ps = polarscale;
namespace fs = std::filesystem;
using ps::make_rational;
using ps::Rational;

namespace {

// Tolerances and targets.
constexpr double kRhatTol = 5e-3;
constexpr double kRhatBmsc = 0.86275;
constexpr double kMuBec = 3.627;
constexpr double kMuPaperBmsc = 4.714;
constexpr double kMuPaperBec = 3.639;
constexpr double kDeskLimitBmsc = 5.0;
constexpr double kDeskLimitBec = 3.8;
constexpr double kIdentityTol = 1e-12;
constexpr double kSlopeRelTol = 0.10;
constexpr double kEndpointTol = 1e-3;
constexpr double kGammaGapToOne = 1e-4;
constexpr std::size_t kInequalityGrid = 10000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 6)
{
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

fs::path work_dir()
{
    fs::path p = fs::current_path() / "acceptance_work";
    fs::create_directories(p);
    return p;
}

double final_rhat(ps::ChannelOperator op, const Rational& init)
{
    ps::IterationConfig ic;
    ic.grid_size = 10000;
    ic.inner_size = 1000;
    ic.steps = 100;
    ic.init_exponent = init;
    ic.op = op;
    return ps::iterate<double>(ic).rhat.back();
}

Outcome c1()
{
    double r = final_rhat(ps::ChannelOperator::bmsc, make_rational(3, 4));
    return {std::abs(r - kRhatBmsc) <= kRhatTol, "bmsc rhat=" + fmt(r) + " target " + fmt(kRhatBmsc)};
}

Outcome c2()
{
    double target = std::pow(2.0, -1.0 / kMuBec);
    double r = final_rhat(ps::ChannelOperator::bec, make_rational(2, 3));
    return {std::abs(r - target) <= kRhatTol, "bec rhat=" + fmt(r) + " target " + fmt(target)};
}

// Certifies one preset and caches the transcript for criterion 4.
ps::PipelineResult certify_preset(const std::string& preset, ps::ChannelOperator op)
{
    ps::Transcript t;
    auto res = ps::run_certification(ps::preset_run(preset, op), {}, &t);
    std::ofstream os(work_dir() / ("certify_" + std::string(ps::to_string(op)) + "_" + preset + ".transcript"));
    t.write(os);
    return res;
}

Outcome certify_pair(const std::string& preset, double limit_bmsc, double limit_bec,
                     const std::map<std::string, Rational>& anchors)
{
    Outcome o{true, ""};
    for (auto op : {ps::ChannelOperator::bmsc, ps::ChannelOperator::bec}) {
        std::string name(ps::to_string(op));
        auto res = certify_preset(preset, op);
        double limit = op == ps::ChannelOperator::bmsc ? limit_bmsc : limit_bec;
        if (!res.bound.success || !res.bound.mu) {
            o.pass = false;
            o.detail += name + " not certified (" + res.bound.diagnostic + "); ";
            continue;
        }
        const Rational& mu = *res.bound.mu;
        bool ok = ps::to_double(mu) <= limit;
        if (auto a = anchors.find(name); a != anchors.end())
            ok = ok && mu == a->second;
        o.pass = o.pass && ok;
        o.detail += name + " mu<=" + ps::to_string(mu) + " (" + fmt(ps::to_double(mu)) + ", limit " + fmt(limit) + "); ";
    }
    return o;
}

Outcome c3()
{
    return certify_pair("desk", kDeskLimitBmsc, kDeskLimitBec,
                        {{"bmsc", make_rational(4392, 919)}, {"bec", make_rational(11, 3)}});
}

Outcome c3_full() { return certify_pair("paper", kMuPaperBmsc, kMuPaperBec, {}); }

Outcome c4()
{
    Outcome o{true, ""};
    for (auto op : {ps::ChannelOperator::bmsc, ps::ChannelOperator::bec}) {
        fs::path p = work_dir() / ("certify_" + std::string(ps::to_string(op)) + "_desk.transcript");
        if (!fs::exists(p))
            certify_preset("desk", op);
        std::ifstream in(p);
        auto rep = ps::replay::verify(in);
        o.pass = o.pass && rep.ok();
        o.detail += std::string(ps::to_string(op)) + " assertions=" + std::to_string(rep.assertions) +
                    " failures=" + std::to_string(rep.failures.size()) + "; ";
    }
    return o;
}

struct Chain {
    ps::CandidateFunction cand;
    Rational sup, mu;
};

// The BEC chain used by the proof-constant criteria (desk preset).
Chain bec_chain()
{
    auto res = ps::run_certification(ps::preset_run("desk", ps::ChannelOperator::bec), {});
    if (!res.bound.success || !res.bound.mu)
        throw std::runtime_error("bec desk certification failed: " + res.bound.diagnostic);
    return {res.candidate, res.bound.sup_bound, *res.bound.mu};
}

Outcome c5()
{
    Chain ch = bec_chain();
    ps::BigFloat pe(0.001, ps::kChainBits);
    double worst = 0;
    std::size_t points = 0;
    for (Rational mu : {Rational(ch.mu + make_rational(1, 1000)), make_rational(4), make_rational(9, 2), make_rational(5),
                    make_rational(6), make_rational(8)}) {
        // rho1 from the certified sup down to a much smaller ratio
        for (long j = 0; j < 5; ++j) {
            Rational s = ch.sup * make_rational(100 - 10 * j, 100);
            if (!ps::hypothesis_holds(s, mu))
                continue;
            auto k = ps::chain_constants(mu, s, ch.cand, pe);
            worst = std::max(worst, ps::bf::abs(k.identity_residual()).to_double());
            ++points;
        }
    }
    return {points > 0 && worst < kIdentityTol,
            std::to_string(points) + " (mu, rho1) points, max |rho - alpha - 1/mu| = " + fmt(worst, 3)};
}

Outcome c6()
{
    Chain ch = bec_chain();
    auto k = ps::chain_constants(ch.mu, ch.sup, ch.cand, ps::BigFloat(0.001, ps::kChainBits));
    Outcome o{true, "mu=" + ps::to_string(ch.mu) + ";"};
    for (auto z0 : {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}) {
        auto rep = ps::lemma_expectation_check(z0, k, 16);
        o.pass = o.pass && rep.all_hold();
        o.detail += " z0=" + ps::to_string(z0) + (rep.all_hold() ? " holds" : " fails");
    }
    o.detail += " for n<=16";
    return o;
}

Outcome c7()
{
    std::uint64_t pairs = 0, checked = 0, bad = 0, undecided = 0;
    for (long a = 1; a <= 15; ++a)
        for (long b = a; b <= 15; ++b) {
            auto rep = ps::verify_floor_bec(make_rational(a, 16), make_rational(b, 16), 12);
            ++pairs;
            checked += rep.checked;
            bad += rep.violations;
            undecided += rep.undecided;
        }
    return {bad == 0 && undecided == 0, std::to_string(pairs) + " pairs, " + std::to_string(checked) + " nodes, " +
                                            std::to_string(bad) + " violations, " + std::to_string(undecided) +
                                            " undecided"};
}

ps::SweepReport sweep8()
{
    auto code = ps::construct_polar_code(make_rational(1, 2), 10, 512);
    std::vector<Rational> grid;
    for (long k = 5; k <= 50; ++k)
        grid.push_back(make_rational(k, 100));
    return ps::floor_sweep(code, grid);
}

Outcome c8a()
{
    auto r = sweep8();
    return {r.min_slope >= 1.0, "min log-log slope " + fmt(r.min_slope) + " over " + std::to_string(r.points.size()) +
                                    " points"};
}

Outcome c8b()
{
    auto r = sweep8();
    double ref = std::abs(r.reference_exponent);
    double lo = 1e300, hi = -1e300;
    bool ok = true;
    for (std::size_t k = 1; k < r.points.size(); ++k) {
        double s = r.points[k].log_slope;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        ok = ok && std::abs(s - ref) <= kSlopeRelTol * ref;
    }
    return {ok, "slopes in [" + fmt(lo) + ", " + fmt(hi) + "], reference " + fmt(ref) + " +-" +
                    fmt(100 * kSlopeRelTol, 3) + "%"};
}

Outcome c9()
{
    Outcome o{true, ""};
    std::size_t runs = 0;
    for (unsigned n : {4u, 6u, 8u}) {
        auto code = ps::construct_polar_code(make_rational(1, 2), n, (std::uint64_t{1} << n) / 2);
        for (long zk = 1; zk <= 9; zk += 2) {
            Rational z = make_rational(zk, 10);
            auto r = ps::simulate({code, z, 100000, 2024 + n});
            double half = (r.ci.hi - r.ci.lo) / 2;
            double ub = ps::to_double(ps::union_bound_pe(code, z));
            ++runs;
            if (r.estimate > ub + half) {
                o.pass = false;
                o.detail += "n=" + std::to_string(n) + " z=" + ps::to_string(z) + " estimate " + fmt(r.estimate) +
                            " > bound " + fmt(ub) + "; ";
            }
        }
    }
    // single information bit: the estimate targets Z_2^(4) = z^4 exactly
    auto single = ps::make_code(2, make_rational(1, 2), {4});
    auto r = ps::simulate({single, make_rational(1, 2), 100000, 7});
    bool covers = r.ci.lo <= 1.0 / 16 && 1.0 / 16 <= r.ci.hi;
    o.pass = o.pass && covers;
    o.detail += std::to_string(runs) + " runs below union bound + CI; single bit " + fmt(r.estimate) + " CI [" +
                fmt(r.ci.lo) + ", " + fmt(r.ci.hi) + "] vs 1/16";
    return o;
}

Outcome c10a()
{
    Outcome o{true, ""};
    for (double mu : {kMuPaperBmsc, kMuPaperBec}) {
        auto p = ps::tradeoff_point(1 - kGammaGapToOne, mu);
        bool ok = std::abs(p.pe_exponent - 0.5) <= kEndpointTol;
        o.pass = o.pass && ok;
        o.detail += "mu=" + fmt(mu) + " pe exponent " + fmt(p.pe_exponent) + "; ";
    }
    o.detail += "tolerance " + fmt(kEndpointTol);
    return o;
}

Outcome c10b()
{
    Outcome o{true, ""};
    for (double mu : {kMuPaperBmsc, kMuPaperBec}) {
        double g0 = ps::tradeoff_lower_gamma(mu);
        double prev = 1;
        for (double d : {1e-2, 1e-4, 1e-6, 1e-8}) {
            double e = ps::tradeoff_point(g0 + d, mu).pe_exponent;
            o.pass = o.pass && e < prev;
            prev = e;
        }
        o.pass = o.pass && prev <= kEndpointTol;
        o.detail += "mu=" + fmt(mu) + " pe exponent at gamma0+1e-8 = " + fmt(prev, 3) + "; ";
    }
    auto sweep = ps::binomial_tail_sweep(30);
    o.pass = o.pass && sweep.ok();
    o.detail += "binomial tail " + std::to_string(sweep.checked) + " rows, " + std::to_string(sweep.failures.size()) +
                " failures";
    return o;
}

Outcome c11()
{
    auto y2 = ps::check_inequality_y2(kInequalityGrid);
    auto ineq = ps::proof_inequalities_check(kInequalityGrid);
    Chain ch = bec_chain();
    auto k = ps::chain_constants(ch.mu, ch.sup, ch.cand, ps::BigFloat(0.001, ps::kChainBits));
    auto conc = ps::t_concavity_check(k.alpha, kInequalityGrid);
    bool ok = y2.ok() && ineq.ok() && conc.ok();
    return {ok, std::string("y2 ") + (y2.ok() ? "ok" : "fails") + ", 2-x^eta bounds " + (ineq.ok() ? "ok" : "fail") +
                    " (counterexamples " + std::to_string(ineq.squared_counterexample.violated) + ", " +
                    std::to_string(ineq.linear_counterexample.violated) + "), t concave " +
                    std::to_string(conc.triples - conc.violations) + "/" + std::to_string(conc.triples)};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::string which;
    app.add_option("--criterion", which, "criterion id")->required();
    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, std::function<Outcome()>> table{
        {"1", c1},    {"2", c2},   {"3", c3},   {"3-full", c3_full}, {"4", c4},     {"5", c5},   {"6", c6},
        {"7", c7},    {"8a", c8a}, {"8b", c8b}, {"9", c9},           {"10a", c10a}, {"10b", c10b}, {"11", c11}};
    auto it = table.find(which);
    if (it == table.end()) {
        std::cerr << "unknown criterion " << which << '\n';
        return 2;
    }
    Outcome o;
    try {
        o = it->second();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << which << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << std::endl;
    return o.pass ? 0 : 1;
}
