#include "epr/engine.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "epr/errors.hpp"

namespace epr {
namespace {

// Task granularity for the worker pool. 64k pairs is coarse enough that
// thread overhead vanishes and fine enough to load-balance a 101-step sweep.
constexpr std::uint64_t kTaskSize = std::uint64_t{1} << 16;

}  // namespace

void RunConfig::validate() const {
    std::vector<std::string> problems;
    if (pairs_per_setting < 1 || pairs_per_setting > (std::uint64_t{1} << 48))
        problems.push_back("pairs must lie in [1, 2^48]");
    if (steps < 1) problems.push_back("steps must be >= 1");
    if (!std::isfinite(alpha_start) || !std::isfinite(alpha_end))
        problems.push_back("alpha range must be finite");
    else if (alpha_end < alpha_start)
        problems.push_back("alpha_end must be >= alpha_start");
    if (!std::isfinite(beta)) problems.push_back("beta must be finite");
    if (!std::isfinite(delta)) problems.push_back("delta must be finite");
    if (!(threshold >= 0.0 && threshold < 0.5))
        problems.push_back("threshold must lie in [0, 0.5)");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        problems.push_back("eta must lie in (0, 1]");
    if (!(decoherence >= 0.0 && decoherence <= 1.0))
        problems.push_back("decoherence must lie in [0, 1]");
    if (!problems.empty()) {
        std::string msg = "invalid configuration: ";
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i != 0) msg += "; ";
            msg += problems[i];
        }
        throw ValidationError(msg);
    }
}

std::vector<double> sweep_alphas(const RunConfig& cfg) {
    std::vector<double> alphas;
    alphas.reserve(cfg.steps);
    if (cfg.steps == 1) {
        alphas.push_back(cfg.alpha_start);
        return alphas;
    }
    const double span = cfg.alpha_end - cfg.alpha_start;
    const double denom = static_cast<double>(cfg.steps - 1);
    for (std::uint32_t k = 0; k < cfg.steps; ++k)
        alphas.push_back(cfg.alpha_start + (static_cast<double>(k) * span) / denom);
    return alphas;
}

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    if (const char* env = std::getenv("EPR_THREADS"); env != nullptr && *env != '\0') {
        char* endp = nullptr;
        errno = 0;
        const unsigned long v = std::strtoul(env, &endp, 10);
        if (errno != 0 || endp == env || *endp != '\0' || v == 0 || v > 4096)
            throw ConfigError(std::string("EPR_THREADS must be an integer in [1, 4096], got '") +
                              env + "'");
        return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

CoincidenceTally run_setting(const RunConfig& cfg, double alpha,
                             std::uint32_t setting_index, KernelKind kernel,
                             unsigned workers) {
    cfg.validate();
    if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");

    kernels::SettingParams sp;
    sp.seed = cfg.seed;
    sp.setting_index = setting_index;
    sp.alpha = wrap_two_pi(alpha);
    sp.beta = wrap_two_pi(cfg.beta);
    sp.delta = wrap_two_pi(cfg.delta);
    sp.threshold = cfg.threshold;
    sp.efficiency = cfg.efficiency;
    sp.decoherence = cfg.decoherence;

    const kernels::TallyFn fn = kernels::kernel_fn(kernel);
    const std::uint64_t n = cfg.pairs_per_setting;

    // Fixed-size tasks with per-task tally slots: counts are integers, so the
    // merged result is the same no matter how tasks land on workers.
    const std::uint64_t ntasks = (n + kTaskSize - 1) / kTaskSize;
    const unsigned nworkers = static_cast<unsigned>(
        std::min<std::uint64_t>(resolve_workers(workers), ntasks));

    if (nworkers <= 1) {
        CoincidenceTally tally;
        fn(sp, 0, n, tally);
        return tally;
    }

    std::vector<CoincidenceTally> slots(ntasks);
    std::vector<std::thread> threads;
    threads.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w) {
        threads.emplace_back([&slots, &sp, fn, n, ntasks, nworkers, w] {
            for (std::uint64_t task = w; task < ntasks; task += nworkers) {
                const std::uint64_t begin = task * kTaskSize;
                fn(sp, begin, std::min(kTaskSize, n - begin), slots[task]);
            }
        });
    }
    for (auto& th : threads) th.join();

    CoincidenceTally tally;
    for (const CoincidenceTally& slot : slots) tally += slot;
    return tally;
}

CorrelationCurve sweep(const RunConfig& cfg, KernelKind kernel, unsigned workers) {
    cfg.validate();
    const std::vector<double> alphas = sweep_alphas(cfg);
    CorrelationCurve curve;
    curve.points.reserve(alphas.size());
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        CurvePoint pt;
        pt.alpha = alphas[k];
        pt.beta = cfg.beta;
        pt.tally = run_setting(cfg, alphas[k], static_cast<std::uint32_t>(k), kernel, workers);
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace epr
