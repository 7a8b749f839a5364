#pragma once

#include <json.hpp>

#include "kbm/ball.hpp"
#include "kbm/linforms.hpp"
#include "kbm/meet.hpp"
#include "kbm/redux.hpp"

namespace kbm::jsonio {

using nlohmann::json;
using nlohmann::ordered_json;

inline ordered_json ball_json(const BallReal& b) {
    return ordered_json{{"mid", b.mid_str(40)},
                        {"rad", b.rad_str()},
                        {"bits", static_cast<long>(b.precision())}};
}

inline ordered_json hit_json(const meet::CoincidenceHit& h) {
    ordered_json att = ordered_json::array();
    for (const auto& a : h.attainers) att.push_back(ordered_json{{"k", a.k}, {"n", a.n}});
    return ordered_json{{"value", h.value.get_str()}, {"attainers", att}};
}

inline ordered_json cert_json(const redux::ReductionCertificate& c) {
    return ordered_json{{"k", c.k},
                        {"M", c.M.get_str()},
                        {"gamma", ball_json(c.gamma)},
                        {"mu", ball_json(c.mu)},
                        {"q", c.q.get_str()},
                        {"q_index", c.q_index},
                        {"epsilon", ball_json(c.epsilon)},
                        {"A", c.A},
                        {"B", c.B},
                        {"ell_bound", c.ell_bound}};
}

inline ordered_json chain_report_json(const linforms::BoundChainReport& r) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries)
        entries.push_back(ordered_json{{"name", e.name},
                                       {"paper", e.paper_value},
                                       {"exact", e.exact_value},
                                       {"valid", e.valid}});
    return ordered_json{{"input", r.input},
                        {"entries", entries},
                        {"final_bound", r.final_bound},
                        {"all_valid", r.all_valid}};
}

inline ordered_json discrepancy_json(const redux::EndgameDiscrepancy& d) {
    return ordered_json{{"A", d.A},
                        {"q", "2e1125"},
                        {"eps", d.eps},
                        {"log2_variant", d.log2_variant},
                        {"log_sqrt2_variant", d.log_sqrt2_variant},
                        {"conservative", d.conservative}};
}

}  // namespace kbm::jsonio
