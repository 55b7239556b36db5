#include "learndag/config.hpp"

#include <algorithm>
#include <string>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/stattests.hpp"

namespace learndag {

namespace {

void check_level(const char* name, double value) {
    if (!(value > 0.0 && value < 1.0))
        throw validation_error(std::string(name) + " must lie strictly in (0,1), got " +
                               std::to_string(value));
}

}  // namespace

void Config::validate() const {
    if (alpha_pns) check_level("alpha_pns", *alpha_pns);
    if (alpha_prune) check_level("alpha_prune", *alpha_prune);
    check_level("alpha_margin", alpha_margin);
    if (alpha_exponent && !(*alpha_exponent > 0.0))
        throw validation_error("alpha_exponent must be positive");
    if (max_parents && *max_parents < 1)
        throw validation_error("max_parents must be a positive integer");
    if (bootstrap_b < 1) throw validation_error("bootstrap_b must be at least 1");
    if (!(bootstrap_threshold > 0.0 && bootstrap_threshold <= 1.0))
        throw validation_error("bootstrap_threshold must lie in (0,1]");
    if (threads < 0) throw validation_error("threads must be non-negative");
}

ResolvedConfig resolve_config(const Config& config, int n, int p) {
    config.validate();
    ResolvedConfig r;
    r.alpha_exponent = config.alpha_exponent.value_or(p <= 50 ? 0.15 : 0.2);
    double scheduled = stats::alpha_schedule(n, r.alpha_exponent);
    r.alpha_pns = config.alpha_pns.value_or(scheduled);
    r.alpha_prune = config.alpha_prune.value_or(scheduled);
    r.alpha_margin = config.alpha_margin;
    r.max_parents = config.max_parents.value_or(std::max(1, p - 2));
    r.bootstrap_b = config.bootstrap_b;
    r.bootstrap_threshold = config.bootstrap_threshold;
    r.score_kind = config.score_kind;
    r.use_pns = config.use_pns;
    r.use_margin_step = config.use_margin_step;
    r.prune_mode = config.prune_mode;
    r.pns_rule = config.pns_rule;
    r.min_gain = config.min_gain;
    r.seed = config.seed;
    r.threads = resolve_threads(config.threads);
    return r;
}

std::string to_string(ScoreKind kind) {
    return kind == ScoreKind::LogLik ? "loglik" : "bic";
}

std::string to_string(PruneMode mode) {
    switch (mode) {
        case PruneMode::WaldStep3: return "wald";
        case PruneMode::DevianceInStep2: return "deviance";
        case PruneMode::None: return "none";
    }
    return "unknown";
}

std::string to_string(SymmetrizeRule rule) {
    return rule == SymmetrizeRule::Or ? "or" : "and";
}

}  // namespace learndag
