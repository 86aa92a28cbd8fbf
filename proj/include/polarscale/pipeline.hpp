#pragma once

// Iterate -> snap to a candidate -> certify, with the two parameter presets.

#include "candidate.hpp"
#include "certify.hpp"
#include "eigen_iter.hpp"
#include "transcript.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polarscale {

struct CertifyRun {
    IterationConfig iteration;
    CandidateParams candidate;
};

// "paper": N_s = 10^6, M_s = 10^4, k = 100. "desk": N_s = 10^5, M_s = 10^3.
inline CertifyRun preset_run(std::string_view preset, ChannelOperator op)
{
    CertifyRun r;
    if (preset == "paper") {
        r.iteration.grid_size = 1000000;
        r.iteration.inner_size = 10000;
    } else if (preset == "desk") {
        r.iteration.grid_size = 100000;
        r.iteration.inner_size = 1000;
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (expected paper or desk)");
    }
    r.iteration.steps = 100;
    r.iteration.op = op;
    if (op == ChannelOperator::bec) {
        r.iteration.init_exponent = make_rational(2, 3);
        r.candidate.eta = make_rational(72, 100);
        r.candidate.mbar = 5;
    } else {
        r.iteration.init_exponent = make_rational(3, 4);
        r.candidate.eta = make_rational(78, 100);
        r.candidate.mbar = 13;
    }
    r.candidate.delta_s = make_rational(1, 10000);
    return r;
}

struct PipelineResult {
    double final_rhat = 0;
    CandidateFunction candidate;
    CertifiedBound bound;
};

inline PipelineResult run_certification(const CertifyRun& run, const CertifyOptions& opt, Transcript* t = nullptr,
                                        const std::function<void(const std::string&)>& progress = {})
{
    auto say = [&](const std::string& s) {
        if (progress)
            progress(s);
    };
    IterationConfig ic = run.iteration;
    ic.threads = opt.threads;
    say("iterating " + std::string(to_string(ic.op)) + " operator, N_s=" + std::to_string(ic.grid_size));
    auto it = iterate<double>(ic, [&](std::size_t k, double r) {
        if (k % 10 == 0)
            say("  step " + std::to_string(k) + " rhat=" + std::to_string(r));
    });
    PipelineResult res;
    res.final_rhat = it.rhat.back();
    say("building candidate");
    res.candidate = build_candidate(it.h, run.candidate);
    const CandidateFunction& cand = res.candidate;
    if (t) {
        t->comment("operator " + std::string(to_string(ic.op)) + ", N_s=" + std::to_string(ic.grid_size) +
                   ", M_s=" + std::to_string(ic.inner_size) + ", k=" + std::to_string(ic.steps));
        t->comment("eta=" + to_string(run.candidate.eta) + ", mbar=" + std::to_string(run.candidate.mbar) +
                   ", delta_s=" + to_string(run.candidate.delta_s));
    }
    say("certifying " + std::to_string(cand.size()) + " candidate points");
    res.bound = certify(cand, ic.op, opt, t);
    return res;
}

} // namespace polarscale
