#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "skewstream/sifi.hpp"
#include "skewstream/types.hpp"

namespace skewstream {

/// Normalizing constant of Rissanen's universal integer code.
inline constexpr double kLogStarConstant = 2.865064;

/// Universal code length in bits: log2(c0) plus the positive iterated log2 terms of n.
double log_star(std::uint64_t n);

enum class CostCase { same_regime, switch_existing, new_regime };

const char* to_string(CostCase c);

struct CostBreakdown {
    CostCase cost_case = CostCase::same_regime;
    /// Regime the row was evaluated for; -1 for the candidate.
    int regime_id = -1;
    double delta_model_cost = 0.0;
    double data_cost = 0.0;
    double total = 0.0;
};

struct MdlConfig {
    /// Bits charged per free real-valued parameter.
    double bits_per_parameter = 32.0;
};

/// Free real parameters of one regime: K(U-1) per categorical attribute,
/// 2K per continuous attribute, ticks(K-1) for the time mixture.
std::size_t free_parameter_count(std::size_t K, std::span<const std::size_t> vocab, std::size_t num_continuous,
                                 std::size_t ticks);

double model_cost_regime(const ComponentMatrices& matrices, const AttributeSchema& schema,
                         const MdlConfig& config = {});

/// Switch position via the universal code plus a fixed-length regime identifier.
double model_cost_switch(std::uint64_t position, std::size_t regime_count);

/// Extra model bits for encoding the next window under `cost_case`. `position` is
/// the 1-based window position of the potential switch. R and G are taken from `c`.
double delta_model_cost(CostCase cost_case, const ComponentMatrices& regime_matrices, const AttributeSchema& schema,
                        const CompactDescription& c, std::uint64_t position, const MdlConfig& config = {});

/// Natural-log likelihood to bits.
inline double nats_to_bits(double nats) { return nats / 0.6931471805599453; }

struct Selection {
    CostCase cost_case = CostCase::same_regime;
    /// Chosen existing regime id, or -1 when the candidate wins.
    int regime_id = -1;
    std::vector<CostBreakdown> considered;
    /// Data cost in bits of this window under each existing regime (refit mixture).
    std::map<int, double> existing_data_cost;

    const CostBreakdown& chosen() const;
};

/// Data cost in bits of the window under a stored regime, with its time mixture refit.
double existing_regime_data_cost(const CurrentTensor& window, const Regime& regime, const SifiConfig& config, Rng& rng);

/// Chooses between staying, switching to an existing regime, and adding the candidate,
/// minimizing model plus data bits. Ties prefer staying, then the lowest regime id.
Selection select_regime(const CurrentTensor& window, const ComponentMatrices& candidate, const CompactDescription& c,
                        const AttributeSchema& schema, const SifiConfig& sifi, const MdlConfig& mdl, Rng& rng);

}  // namespace skewstream
