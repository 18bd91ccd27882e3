#include "flightq/engine.hpp"

#include <algorithm>
#include <cassert>

#include "json.hpp"
#include <cmath>

namespace flightq {

namespace {
constexpr double kTimeEps = 1e-9;
}

SeparationReport check_separation(std::span<const Vec3> positions, double delta_min) {
    SeparationReport rep;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            double d = positions[i].distance_to(positions[j]);
            rep.min_distance = std::min(rep.min_distance, d);
            if (d < delta_min - 1e-12) rep.violations.emplace_back(i, j);
        }
    }
    return rep;
}

Simulation::Simulation(Scenario scenario, TraceSink* sink)
    : scenario_(std::move(scenario)), sink_(sink) {
    auto issues = validate_scenario(scenario_);
    if (!issues.empty()) throw ConfigInvalid(std::move(issues));

    for (const auto& cfg : scenario_.openings) {
        PatternSpec spec = cfg.pattern;
        spec.anchor = cfg.position;
        Pattern pat = build_pattern(spec);

        Opening o;
        o.id = cfg.id;
        o.position = cfg.position;
        o.lambda = cfg.lambda;
        o.queue = PatternQueue(pat, cfg.lambda, cfg.policy);
        openings_.push_back(std::move(o));

        OpeningExtra extra;
        extra.normal = pat.plane_normal;
        for (const auto& s : pat.slots)
            extra.top_offset = std::max(extra.top_offset, extra.normal.dot(s - pat.anchor));
        extras_.push_back(std::move(extra));

        OpeningMetrics om;
        om.opening_id = cfg.id;
        metrics_.per_opening.push_back(om);
    }
    dispatcher_ = Dispatcher(scenario_.dispatch);
    arrivals_ = generate(scenario_.workload, scenario_.sim.seed);

    if (sink_) {
        TraceHeader h;
        h.scenario = scenario_.name;
        h.seed = scenario_.sim.seed;
        h.dt = scenario_.sim.dt;
        h.delta_min = scenario_.sim.delta_min;
        sink_->write_line(to_json_line(h));
    }
}

std::size_t Simulation::opening_index(int opening_id) const {
    for (std::size_t i = 0; i < openings_.size(); ++i)
        if (openings_[i].id == opening_id) return i;
    throw Error("unknown opening id " + std::to_string(opening_id));
}

void Simulation::emit(const Event& e) {
    if (sink_) sink_->write_line(to_json_line(e));
    events_.push_back(e);
}

void Simulation::spawn_due_arrivals() {
    double now = clock();
    while (next_arrival_ < arrivals_.size() &&
           arrivals_[next_arrival_].t <= now + kTimeEps) {
        const Arrival& a = arrivals_[next_arrival_++];
        Drone d;
        d.position = a.position;
        d.v_max = scenario_.sim.v_max;
        d.remaining_flight_time = a.battery;
        d.spawn_battery = a.battery;
        d.spawn_time = now;
        d.drone_class = a.drone_class;
        Drone& nd = drones_.spawn(std::move(d));
        ++metrics_.spawned;

        Event ev;
        ev.t = now;
        ev.kind = "spawn";
        ev.drone = nd.id;
        ev.has_position = true;
        ev.position = nd.position;
        ev.battery = nd.spawn_battery;
        ev.drone_class = nd.drone_class;
        emit(ev);

        std::vector<int> inbound;
        if (scenario_.dispatch.count_inbound) {
            inbound.assign(openings_.size(), 0);
            for (const auto& other : drones_.all()) {
                if (other.id == nd.id || other.terminal()) continue;
                if (other.opening < 0) continue;
                if (other.state == DroneState::Spawned ||
                    other.state == DroneState::Approaching)
                    ++inbound[opening_index(other.opening)];
            }
        }
        AssignmentDecision dec = dispatcher_.assign(nd, openings_, inbound);
        nd.opening = dec.opening_id;
        std::size_t oi = opening_index(dec.opening_id);
        ++metrics_.per_opening[oi].assigned;

        Event ea;
        ea.t = now;
        ea.kind = "assignment";
        ea.drone = nd.id;
        ea.opening = dec.opening_id;
        ea.estimated_wait = dec.estimated_wait;
        ea.travel_time = dec.travel_time;
        ea.feasible = dec.feasible ? 1 : 0;
        emit(ea);

        if (auto slot = openings_[oi].queue.enqueue(nd)) {
            nd.state = DroneState::Approaching;
            nd.approach_phase = 0;
            nd.approach_lane = static_cast<int>(
                extras_[oi].enqueue_seq++ %
                std::max(1, scenario_.sim.approach_lanes));
            Event eq;
            eq.t = now;
            eq.kind = "enqueue";
            eq.drone = nd.id;
            eq.opening = dec.opening_id;
            eq.slot = slot->slot;
            emit(eq);
        } else {
            extras_[oi].holds.push_back(nd.id);
            Event eh;
            eh.t = now;
            eh.kind = "hold";
            eh.drone = nd.id;
            eh.opening = dec.opening_id;
            emit(eh);
        }
    }
}

void Simulation::complete_due_swaps() {
    double now = clock();
    std::vector<ActiveSwap> remaining;
    remaining.reserve(swaps_.size());
    for (auto& sw : swaps_) {
        if (now + kTimeEps >= sw.plan.start_time + sw.plan.duration) {
            openings_[sw.opening_index].queue.finish_swap(drones_, sw.plan);
            --extras_[sw.opening_index].active_swaps;
            Event ev;
            ev.t = now;
            ev.kind = "swap_end";
            ev.drone = sw.plan.drone_a;
            ev.drone_b = sw.plan.drone_b;
            ev.opening = openings_[sw.opening_index].id;
            ev.slot = sw.plan.slot_low;
            ev.slot_b = sw.plan.slot_low + 1;
            emit(ev);
        } else {
            remaining.push_back(std::move(sw));
        }
    }
    swaps_ = std::move(remaining);
}

void Simulation::fire_admissions() {
    double now = clock();
    for (std::size_t oi = 0; oi < openings_.size(); ++oi) {
        Opening& o = openings_[oi];
        while (o.queue.next_admission_time() <= now + kTimeEps) {
            auto admitted = o.queue.admission_tick(drones_, now);
            if (admitted) {
                Drone& d = drones_.at(*admitted);
                double transit = now - d.spawn_time;
                ++metrics_.admitted;
                metrics_.transit_sum += transit;
                metrics_.transit_max = std::max(metrics_.transit_max, transit);
                auto& om = metrics_.per_opening[oi];
                ++om.admitted;
                om.transit_sum += transit;
                om.transit_max = std::max(om.transit_max, transit);
                dispatcher_.release(o.id, d.id);

                Event ev;
                ev.t = now;
                ev.kind = "admission";
                ev.drone = d.id;
                ev.opening = o.id;
                ev.transit = transit;
                emit(ev);
            }
            // freed tail capacity goes to holders, oldest first
            auto& holds = extras_[oi].holds;
            while (!holds.empty()) {
                Drone& h = drones_.at(holds.front());
                auto slot = o.queue.enqueue(h);
                if (!slot) break;
                h.state = DroneState::Approaching;
                h.approach_phase = 0;
                h.approach_lane = static_cast<int>(
                    extras_[oi].enqueue_seq++ %
                    std::max(1, scenario_.sim.approach_lanes));
                holds.pop_front();
                Event eq;
                eq.t = now;
                eq.kind = "enqueue";
                eq.drone = h.id;
                eq.opening = o.id;
                eq.slot = slot->slot;
                emit(eq);
            }
        }
    }
}

void Simulation::start_gossip_swaps() {
    double now = clock();
    for (std::size_t oi = 0; oi < openings_.size(); ++oi) {
        Opening& o = openings_[oi];
        if (o.queue.policy().kind != PolicyKind::LeastRemainingFlightTimeFirst) continue;
        OpeningExtra& extra = extras_[oi];
        if (extra.active_swaps > 0) continue;
        if (extra.gossip_round_mark == o.queue.ticks_fired()) continue;
        double window = o.queue.next_admission_time() - now;
        if (window + 1e-12 < o.queue.policy().swap_duration) continue;
        // hold the round until the dwell actually starts: every queued drone
        // settled at its slot
        bool ready = true;
        int settled_count = 0;
        for (int k = 0; k < o.queue.slot_count(); ++k) {
            std::int64_t id = o.queue.occupant(k);
            if (id < 0) continue;
            const Drone& d = drones_.at(id);
            if (d.state != DroneState::Queued) continue;
            if (!PatternQueue::settled(
                    d, o.queue.pattern().slots[static_cast<std::size_t>(k)])) {
                ready = false;
                break;
            }
            ++settled_count;
        }
        if (!ready || settled_count < 2) continue;
        extra.gossip_round_mark = o.queue.ticks_fired();
        auto decisions = o.queue.gossip_round(drones_);
        for (int k : decisions) {
            SwapPlan plan = o.queue.execute_swap(drones_, k, now);
            Event ev;
            ev.t = now;
            ev.kind = "swap_start";
            ev.drone = plan.drone_a;
            ev.drone_b = plan.drone_b;
            ev.opening = o.id;
            ev.slot = k;
            ev.slot_b = k + 1;
            emit(ev);
            swaps_.push_back({std::move(plan), oi});
            ++extra.active_swaps;
        }
    }
}

void Simulation::snapshot() {
    if (!sink_) return;
    double now = clock();
    for (const auto& d : drones_.all()) {
        if (d.terminal()) continue;
        TickRecord r;
        r.t = now;
        r.drone = d.id;
        r.position = d.position;
        r.state = d.state;
        r.slot = d.slot;
        r.opening = d.opening;
        r.remaining = d.remaining_flight_time;
        sink_->write_line(to_json_line(r));
    }
}

double Simulation::cruise_altitude(const Drone& d, const OpeningExtra& extra) const {
    double offset = scenario_.sim.effective_approach_offset();
    return extra.top_offset + offset * (1.0 + static_cast<double>(d.approach_lane));
}

void Simulation::move_approaching(Drone& d, const Opening& o, const OpeningExtra& extra) {
    const Pattern& pat = o.queue.pattern();
    Vec3 slot_pos = pat.slots[static_cast<std::size_t>(d.slot)];
    Vec3 n = extra.normal;
    double cruise = cruise_altitude(d, extra);
    double budget = d.v_max * scenario_.sim.dt;

    // Once descending, the drone chases its slot directly; a reservation that
    // advances mid-descent just bends the final leg one chord sideways. When
    // that straight line would brush an occupied slot on another level (a
    // layer junction moved the target down the stack), route back through the
    // cruise lane instead.
    if (d.approach_phase == 2) {
        auto segment_clear = [&]() {
            Vec3 seg = slot_pos - d.position;
            double len2 = seg.dot(seg);
            double target_off = n.dot(slot_pos - pat.anchor);
            for (int k = 0; k < o.queue.slot_count(); ++k) {
                if (k == d.slot || o.queue.slot_free(k)) continue;
                const Vec3& s = pat.slots[static_cast<std::size_t>(k)];
                if (std::abs(n.dot(s - pat.anchor) - target_off) < 1e-6) continue;
                double f = len2 > 0.0
                               ? std::clamp((s - d.position).dot(seg) / len2, 0.0, 1.0)
                               : 0.0;
                Vec3 closest = d.position + seg * f;
                if (closest.distance_to(s) < 2.0 * scenario_.sim.delta_min) return false;
            }
            return true;
        };
        if (!segment_clear()) d.approach_phase = 1;
    }

    while (budget > 1e-15) {
        Vec3 target;
        if (d.approach_phase == 0) {
            target = d.position + n * (cruise - n.dot(d.position - pat.anchor));
        } else if (d.approach_phase == 1) {
            target = slot_pos + n * (cruise - n.dot(slot_pos - pat.anchor));
        } else {
            target = slot_pos;
        }
        double dist = d.position.distance_to(target);
        if (dist <= budget + 1e-15) {
            d.position = target;
            budget -= dist;
            if (d.approach_phase < 2) {
                ++d.approach_phase;
                continue;
            }
            d.position = slot_pos;
            d.state = DroneState::Queued;
            Event ev;
            ev.t = static_cast<double>(tick_ + 1) * scenario_.sim.dt;
            ev.kind = "arrival";
            ev.drone = d.id;
            ev.opening = o.id;
            ev.slot = d.slot;
            emit(ev);
            return;
        }
        d.position += (target - d.position) * (budget / dist);
        return;
    }
}

void Simulation::move_drones() {
    double end_t = static_cast<double>(tick_ + 1) * scenario_.sim.dt;
    for (auto& d : drones_.all()) {
        switch (d.state) {
            case DroneState::Spawned:
            case DroneState::Admitted:
            case DroneState::Failed:
                break;
            case DroneState::Approaching: {
                std::size_t oi = opening_index(d.opening);
                move_approaching(d, openings_[oi], extras_[oi]);
                break;
            }
            case DroneState::Queued: {
                std::size_t oi = opening_index(d.opening);
                const Pattern& pat = openings_[oi].queue.pattern();
                Vec3 target = pat.slots[static_cast<std::size_t>(d.slot)];
                double dist = d.position.distance_to(target);
                if (dist <= 1e-9) break;
                double budget = d.v_max * scenario_.sim.dt;
                if (dist <= budget) {
                    d.position = target;
                    Event ev;
                    ev.t = end_t;
                    ev.kind = "arrival";
                    ev.drone = d.id;
                    ev.opening = openings_[oi].id;
                    ev.slot = d.slot;
                    emit(ev);
                } else {
                    d.position += (target - d.position) * (budget / dist);
                }
                break;
            }
            case DroneState::Swapping: {
                for (const auto& sw : swaps_) {
                    if (sw.plan.drone_a == d.id) {
                        d.position = sw.plan.position_a(sw.plan.phase_at(end_t));
                        break;
                    }
                    if (sw.plan.drone_b == d.id) {
                        d.position = sw.plan.position_b(sw.plan.phase_at(end_t));
                        break;
                    }
                }
                break;
            }
        }
    }
}

void Simulation::drain_batteries() {
    double end_t = static_cast<double>(tick_ + 1) * scenario_.sim.dt;
    for (auto& d : drones_.all()) {
        if (d.terminal()) continue;
        d.remaining_flight_time -= scenario_.sim.dt;
        if (d.remaining_flight_time > 1e-12) continue;
        d.remaining_flight_time = 0.0;
        d.failed_time = end_t;
        bool was_spawned = d.state == DroneState::Spawned;
        d.state = DroneState::Failed;
        if (d.opening >= 0) {
            std::size_t oi = opening_index(d.opening);
            if (d.slot >= 0) openings_[oi].queue.vacate(d.id);
            if (was_spawned) {
                auto& holds = extras_[oi].holds;
                holds.erase(std::remove(holds.begin(), holds.end(), d.id), holds.end());
            }
            ++metrics_.per_opening[oi].failed;
            dispatcher_.release(d.opening, d.id);
        }
        d.slot = -1;
        ++metrics_.failed;

        Event ev;
        ev.t = end_t;
        ev.kind = "failure";
        ev.drone = d.id;
        ev.opening = d.opening;
        ev.has_position = true;
        ev.position = d.position;
        emit(ev);
    }
}

void Simulation::audit_separation() {
    double end_t = static_cast<double>(tick_ + 1) * scenario_.sim.dt;
    std::vector<Vec3> positions;
    std::vector<std::int64_t> ids;
    for (const auto& d : drones_.all()) {
        if (d.terminal()) continue;
        positions.push_back(d.position);
        ids.push_back(d.id);
    }
    if (positions.size() < 2) return;
    SeparationReport rep = check_separation(positions, scenario_.sim.delta_min);
    metrics_.min_separation = std::min(metrics_.min_separation, rep.min_distance);
    for (const auto& [i, j] : rep.violations) {
        ++metrics_.separation_violations;
        Event ev;
        ev.t = end_t;
        ev.kind = "separation_violation";
        ev.drone = ids[i];
        ev.drone_b = ids[j];
        ev.distance = positions[i].distance_to(positions[j]);
        emit(ev);
    }
}

void Simulation::account_tick() {
    // conservation: spawned = holding + approaching + queued + swapping +
    // admitted + failed
    std::int64_t counts[6] = {0, 0, 0, 0, 0, 0};
    for (const auto& d : drones_.all()) ++counts[static_cast<int>(d.state)];
    std::int64_t sum = counts[0] + counts[1] + counts[2] + counts[3] + counts[4] + counts[5];
    if (sum != metrics_.spawned || counts[4] != metrics_.admitted ||
        counts[5] != metrics_.failed ||
        metrics_.spawned != static_cast<std::int64_t>(drones_.size())) {
        ++metrics_.invariant_breaches;
        assert(false && "conservation identity breached");
    }

    if (scenario_.dispatch.mode == DispatchMode::Shared) {
        double total = 0.0;
        for (const auto& o : openings_) total += o.lambda;
        if (std::abs(total - scenario_.dispatch.lambda_total) >
            1e-12 * std::max(1.0, std::abs(scenario_.dispatch.lambda_total))) {
            ++metrics_.invariant_breaches;
            assert(false && "shared-mode rate conservation breached");
        }
    }

    for (std::size_t oi = 0; oi < openings_.size(); ++oi) {
        try {
            openings_[oi].queue.check_invariants(drones_);
        } catch (const Error&) {
            ++metrics_.invariant_breaches;
            assert(false && "queue invariant breached");
        }
        int qlen = openings_[oi].queue.occupancy_size() +
                   static_cast<int>(extras_[oi].holds.size());
        metrics_.per_opening[oi].max_queue_len =
            std::max(metrics_.per_opening[oi].max_queue_len, qlen);
        metrics_.max_queue_len = std::max(metrics_.max_queue_len, qlen);
    }
}

void Simulation::step() {
    spawn_due_arrivals();
    complete_due_swaps();
    fire_admissions();
    start_gossip_swaps();
    snapshot();
    move_drones();
    drain_batteries();
    audit_separation();
    account_tick();
    ++tick_;
}

bool Simulation::finished() const {
    if (clock() >= scenario_.sim.horizon - kTimeEps) return true;
    if (next_arrival_ < arrivals_.size()) return false;
    for (const auto& d : drones_.all())
        if (!d.terminal()) return false;
    return true;
}

RunResult Simulation::finish() {
    while (!finished()) step();
    if (!final_snapshot_done_) {
        snapshot();
        final_snapshot_done_ = true;
        metrics_.elapsed = clock();
        if (sink_) {
            nlohmann::json j;
            j["record"] = "end";
            j["t"] = metrics_.elapsed;
            sink_->write_line(j.dump());
        }
    }
    metrics_.elapsed = clock();
    return {metrics_, std::move(events_)};
}

RunResult run(const Scenario& scenario, TraceSink* sink) {
    Simulation sim(scenario, sink);
    return sim.finish();
}

}  // namespace flightq
