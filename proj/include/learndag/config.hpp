#ifndef LEARNDAG_CONFIG_HPP
#define LEARNDAG_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace learndag {

enum class ScoreKind { LogLik, Bic };
enum class PruneMode { WaldStep3, DevianceInStep2, None };

// How PNS turns two one-sided Wald tests into one undirected edge.
enum class SymmetrizeRule { Or, And };

struct Config {
    // Significance levels; unset values resolve to the sample-size schedule
    // 2(1 - Phi(n^e)) with exponent 0.15 for p <= 50 and 0.2 otherwise.
    std::optional<double> alpha_pns;
    std::optional<double> alpha_prune;
    std::optional<double> alpha_exponent;

    // Cap on |pa(j)|; unset resolves to max(1, p - 2).
    std::optional<int> max_parents;

    int bootstrap_b = 50;
    double bootstrap_threshold = 0.20;

    ScoreKind score_kind = ScoreKind::LogLik;
    bool use_pns = true;

    bool use_margin_step = false;
    double alpha_margin = 0.05;

    PruneMode prune_mode = PruneMode::WaldStep3;
    SymmetrizeRule pns_rule = SymmetrizeRule::Or;

    // Score-matrix entries below this gain are blocked instead of admitted.
    // Set to -infinity to run the greedy sweep exactly as printed.
    double min_gain = 0.0;

    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    // Throws validation_error on out-of-range values.
    void validate() const;
};

// Config with every optional resolved against a concrete dataset.
struct ResolvedConfig {
    double alpha_pns = 0;
    double alpha_prune = 0;
    double alpha_exponent = 0;
    double alpha_margin = 0;
    int max_parents = 0;
    int bootstrap_b = 0;
    double bootstrap_threshold = 0;
    ScoreKind score_kind = ScoreKind::LogLik;
    bool use_pns = true;
    bool use_margin_step = false;
    PruneMode prune_mode = PruneMode::WaldStep3;
    SymmetrizeRule pns_rule = SymmetrizeRule::Or;
    double min_gain = 0;
    std::uint64_t seed = 0;
    int threads = 0;
};

ResolvedConfig resolve_config(const Config& config, int n, int p);

std::string to_string(ScoreKind kind);
std::string to_string(PruneMode mode);
std::string to_string(SymmetrizeRule rule);

}  // namespace learndag

#endif  // LEARNDAG_CONFIG_HPP
