#include "flightq/dispatch.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace flightq {

void validate_rates(std::span<const Opening> openings, double lambda_total) {
    double sum = 0.0;
    for (const auto& o : openings) sum += o.lambda;
    double residual = sum - lambda_total;
    double scale = std::max(std::abs(lambda_total), 1e-300);
    if (std::abs(residual) > 1e-12 * scale)
        throw RateMismatch("sum of opening rates differs from lambda_total by " +
                               std::to_string(residual),
                           residual);
}

namespace {

const Opening* find_opening(std::span<const Opening> openings, int id) {
    for (const auto& o : openings)
        if (o.id == id) return &o;
    return nullptr;
}

}  // namespace

AssignmentDecision Dispatcher::best_of(const Drone& drone,
                                       std::span<const Opening> openings,
                                       std::span<const int> candidate_ids,
                                       std::span<const int> inbound) const {
    AssignmentDecision best;
    double best_cost = std::numeric_limits<double>::infinity();
    AssignmentDecision best_any;
    double best_any_cost = std::numeric_limits<double>::infinity();
    bool have_feasible = false;

    for (std::size_t idx = 0; idx < openings.size(); ++idx) {
        const Opening& o = openings[idx];
        if (!candidate_ids.empty() &&
            std::find(candidate_ids.begin(), candidate_ids.end(), o.id) ==
                candidate_ids.end())
            continue;
        int q_len = o.queue.occupancy_size();
        if (config_.count_inbound && idx < inbound.size()) q_len += inbound[idx];
        double wait = static_cast<double>(q_len) / o.lambda;
        double travel = drone.position.distance_to(o.position) / drone.v_max;
        double cost = config_.w_wait * wait + config_.w_travel * travel;

        AssignmentDecision d;
        d.drone_id = drone.id;
        d.opening_id = o.id;
        d.estimated_wait = wait;
        d.travel_time = travel;
        d.feasible = wait + travel < drone.remaining_flight_time;

        // strict < keeps the lowest-id opening on ties (id order iteration)
        if (d.feasible && cost < best_cost) {
            best = d;
            best_cost = cost;
            have_feasible = true;
        }
        if (cost < best_any_cost) {
            best_any = d;
            best_any_cost = cost;
        }
    }
    if (best_any.opening_id < 0) throw EmptyOpeningSet("no candidate opening");
    // infeasible drones are still routed to the least-bad opening; failures
    // are measured, not prevented
    return have_feasible ? best : best_any;
}

AssignmentDecision Dispatcher::assign(const Drone& drone,
                                      std::span<const Opening> openings,
                                      std::span<const int> inbound) {
    if (openings.empty()) throw EmptyOpeningSet("no openings configured");

    AssignmentDecision decision;
    switch (config_.mode) {
        case DispatchMode::Shared:
            decision = best_of(drone, openings, {}, inbound);
            break;
        case DispatchMode::Exclusive: {
            auto it = config_.partition.find(drone.drone_class);
            if (it == config_.partition.end())
                throw UnmappedDroneClass("no opening mapped for class '" +
                                         drone.drone_class + "'");
            const Opening* o = find_opening(openings, it->second);
            if (!o) throw EmptyOpeningSet("partition maps to unknown opening");
            decision.drone_id = drone.id;
            decision.opening_id = o->id;
            decision.estimated_wait = static_cast<double>(o->queue.occupancy_size()) / o->lambda;
            decision.travel_time = drone.position.distance_to(o->position) / drone.v_max;
            decision.feasible =
                decision.estimated_wait + decision.travel_time < drone.remaining_flight_time;
            break;
        }
        case DispatchMode::Hybrid: {
            const HybridGroup* group = nullptr;
            for (const auto& g : config_.groups)
                if (std::find(g.classes.begin(), g.classes.end(), drone.drone_class) !=
                    g.classes.end()) {
                    group = &g;
                    break;
                }
            if (!group)
                throw UnmappedDroneClass("no hybrid group for class '" +
                                         drone.drone_class + "'");
            if (group->mode == DispatchMode::Exclusive) {
                auto it = group->partition.find(drone.drone_class);
                if (it == group->partition.end())
                    throw UnmappedDroneClass("group partition misses class '" +
                                             drone.drone_class + "'");
                std::vector<int> only{it->second};
                decision = best_of(drone, openings, only, inbound);
            } else {
                decision = best_of(drone, openings, group->openings, inbound);
            }
            break;
        }
    }

#ifndef NDEBUG
    if (config_.mode == DispatchMode::Shared && !config_.count_inbound) {
        // argmin sanity: recompute the brute-force minimum cost
        double chosen = config_.w_wait * decision.estimated_wait +
                        config_.w_travel * decision.travel_time;
        for (const auto& o : openings) {
            double wait = static_cast<double>(o.queue.occupancy_size()) / o.lambda;
            double travel = drone.position.distance_to(o.position) / drone.v_max;
            bool feasible = wait + travel < drone.remaining_flight_time;
            if (feasible == decision.feasible)
                assert(config_.w_wait * wait + config_.w_travel * travel >=
                       chosen - 1e-12);
        }
    }
#endif

    open_assignments_[drone.id] = decision.opening_id;
    return decision;
}

void Dispatcher::release(int opening_id, std::int64_t drone_id) {
    auto it = open_assignments_.find(drone_id);
    if (it == open_assignments_.end() || it->second != opening_id)
        throw UnknownAssignment("drone " + std::to_string(drone_id) +
                                " has no open assignment at opening " +
                                std::to_string(opening_id));
    open_assignments_.erase(it);
}

bool Dispatcher::has_open_assignment(std::int64_t drone_id) const {
    return open_assignments_.count(drone_id) > 0;
}

}  // namespace flightq
