#include "skewstream/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "skewstream/error.hpp"

namespace skewstream {

std::size_t ticks_per_window(double duration, double tick_seconds) {
    if (!(duration > 0.0) || !(tick_seconds > 0.0))
        throw InvalidParameter("window duration and tick length must be positive");
    // Guard against 120/1 landing on 120.00000000000001.
    const double ratio = duration / tick_seconds;
    const auto ticks = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    return std::max<std::size_t>(ticks, 1);
}

CurrentTensor make_window(std::size_t window_index, double start_time, double duration, double tick_seconds,
                          std::vector<Event> events) {
    CurrentTensor w;
    w.window_index = window_index;
    w.start_time = start_time;
    w.duration = duration;
    w.tick_seconds = tick_seconds;
    const std::size_t ticks = ticks_per_window(duration, tick_seconds);
    w.per_tick_counts.assign(ticks, 0);
    w.event_ticks.reserve(events.size());
    for (const Event& e : events) {
        if (e.time < start_time || e.time >= start_time + duration)
            throw InvalidParameter("event time outside window bounds");
        auto tick = static_cast<std::size_t>((e.time - start_time) / tick_seconds);
        tick = std::min(tick, ticks - 1);
        w.event_ticks.push_back(static_cast<std::uint32_t>(tick));
        ++w.per_tick_counts[tick];
    }
    w.events = std::move(events);
    return w;
}

const Regime* CompactDescription::find(int id) const {
    for (const Regime& r : regimes)
        if (r.id == id) return &r;
    return nullptr;
}

Regime* CompactDescription::find(int id) {
    for (Regime& r : regimes)
        if (r.id == id) return &r;
    return nullptr;
}

std::vector<std::string> validate_description(const CompactDescription& c) {
    std::vector<std::string> out;
    std::set<int> ids;
    for (const Regime& r : c.regimes) {
        if (!ids.insert(r.id).second) out.push_back("duplicate regime id " + std::to_string(r.id));
        if (r.total_segment_length < 1) out.push_back("regime " + std::to_string(r.id) + " has empty segment length");
    }
    for (std::size_t g = 0; g < c.switches.size(); ++g) {
        const SwitchRecord& s = c.switches[g];
        if (!ids.contains(s.regime_id)) out.push_back("dangling regime id");
        if (g > 0) {
            const SwitchRecord& prev = c.switches[g - 1];
            if (s.switch_time <= prev.switch_time) out.push_back("switch times not increasing");
            if (s.regime_id == prev.regime_id) out.push_back("redundant switch");
        }
    }
    std::size_t total = 0;
    for (const Regime& r : c.regimes) total += r.total_segment_length;
    if (total != c.windows_described) {
        std::ostringstream msg;
        msg << "segment lengths sum to " << total << " but " << c.windows_described << " windows were described";
        out.push_back(msg.str());
    }
    return out;
}

namespace {

void check_stochastic(const Matrix& m, const std::string& what, double tol, std::vector<std::string>& out) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double sum = 0.0;
        for (double v : m.row(r)) {
            if (!(v >= 0.0)) {
                out.push_back(what + " has a negative or non-finite entry in row " + std::to_string(r));
                return;
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) {
            std::ostringstream msg;
            msg << what << " row " << r << " sums to " << sum;
            out.push_back(msg.str());
            return;
        }
    }
}

}  // namespace

std::vector<std::string> validate_matrices(const ComponentMatrices& m, double tol) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m.cat_dists.size(); ++i) {
        if (m.cat_dists[i].rows() != m.K) out.push_back("categorical matrix row count differs from K");
        check_stochastic(m.cat_dists[i], "categorical matrix " + std::to_string(i), tol, out);
    }
    for (std::size_t i = 0; i < m.gamma_params.size(); ++i) {
        const Matrix& g = m.gamma_params[i];
        if (g.rows() != m.K || g.cols() != 2) out.push_back("gamma matrix must be K x 2");
        for (double v : g.data())
            if (!(v > 0.0) || !std::isfinite(v)) {
                out.push_back("gamma matrix " + std::to_string(i) + " has a non-positive entry");
                break;
            }
    }
    if (m.time_mix.cols() != m.K) out.push_back("time mixture column count differs from K");
    check_stochastic(m.time_mix, "time mixture", tol, out);
    return out;
}

}  // namespace skewstream
