#include "flightq/queue.hpp"

#include <algorithm>
#include <cmath>

namespace flightq {

const char* to_string(DroneState s) {
    switch (s) {
        case DroneState::Spawned: return "spawned";
        case DroneState::Approaching: return "approaching";
        case DroneState::Queued: return "queued";
        case DroneState::Swapping: return "swapping";
        case DroneState::Admitted: return "admitted";
        case DroneState::Failed: return "failed";
    }
    return "?";
}

Drone& DroneStore::spawn(Drone d) {
    d.id = static_cast<std::int64_t>(drones_.size());
    drones_.push_back(std::move(d));
    return drones_.back();
}

Vec3 SwapPlan::position_a(double phase) const {
    Vec3 mid = from_a + (from_b - from_a) * 0.5;
    double c = std::cos(kPi * phase);
    double s = std::sin(kPi * phase);
    return mid - along * (0.5 * distance * c) + lateral * (offset * s);
}

Vec3 SwapPlan::position_b(double phase) const {
    Vec3 mid = from_a + (from_b - from_a) * 0.5;
    double c = std::cos(kPi * phase);
    double s = std::sin(kPi * phase);
    return mid + along * (0.5 * distance * c) - lateral * (offset * s);
}

double SwapPlan::phase_at(double now) const {
    if (duration <= 0.0) return 1.0;
    return std::clamp((now - start_time) / duration, 0.0, 1.0);
}

PatternQueue::PatternQueue(Pattern pattern, double lambda, Policy policy)
    : pattern_(std::move(pattern)), lambda_(lambda), policy_(std::move(policy)) {
    if (lambda_ <= 0.0) throw InvalidRate("queue admission rate must be > 0");
    occupant_.assign(static_cast<std::size_t>(pattern_.slot_count()), -1);
}

int PatternQueue::occupancy_size() const {
    return static_cast<int>(std::count_if(occupant_.begin(), occupant_.end(),
                                          [](std::int64_t v) { return v >= 0; }));
}

int PatternQueue::tail_index() const {
    for (int k = slot_count() - 1; k >= 0; --k)
        if (occupant_[static_cast<std::size_t>(k)] >= 0) return k;
    return -1;
}

bool PatternQueue::contains(std::int64_t drone_id) const {
    return std::find(occupant_.begin(), occupant_.end(), drone_id) != occupant_.end();
}

std::optional<SlotAssignment> PatternQueue::enqueue(Drone& drone) {
    if (contains(drone.id))
        throw DuplicateDrone("drone " + std::to_string(drone.id) + " already queued");
    int tail = tail_index();
    int slot;
    if (tail < 0) {
        slot = 0;  // empty queue: the opening itself
    } else if (tail + 1 < slot_count()) {
        slot = tail + 1;
    } else {
        return std::nullopt;  // nothing free behind the tail: hold
    }
    occupant_[static_cast<std::size_t>(slot)] = drone.id;
    drone.slot = slot;
    return SlotAssignment{slot, pattern_.slots[static_cast<std::size_t>(slot)]};
}

std::optional<std::int64_t> PatternQueue::admission_tick(DroneStore& drones, double now) {
    std::optional<std::int64_t> admitted;
    std::int64_t head = occupant_[0];
    if (head >= 0) {
        Drone& d = drones.at(head);
        if (d.state == DroneState::Queued && settled(d, pattern_.slots[0])) {
            d.state = DroneState::Admitted;
            d.admitted_time = now;
            d.slot = -1;
            occupant_[0] = -1;
            admitted = head;
        }
    }
    // advance drones into free slots toward the head: settled queued drones
    // fly the leg; approaching drones keep chasing their (moving) reservation
    for (int k = 1; k < slot_count(); ++k) {
        std::int64_t id = occupant_[static_cast<std::size_t>(k)];
        if (id < 0 || occupant_[static_cast<std::size_t>(k - 1)] >= 0) continue;
        Drone& d = drones.at(id);
        bool movable =
            d.state == DroneState::Approaching ||
            (d.state == DroneState::Queued &&
             settled(d, pattern_.slots[static_cast<std::size_t>(k)]));
        if (!movable) continue;
        occupant_[static_cast<std::size_t>(k - 1)] = id;
        occupant_[static_cast<std::size_t>(k)] = -1;
        d.slot = k - 1;
    }
    ++ticks_fired_;
    return admitted;
}

std::vector<int> PatternQueue::gossip_round(const DroneStore& drones) {
    if (policy_.kind != PolicyKind::LeastRemainingFlightTimeFirst)
        throw PolicyMismatch("gossip round requires the LRF policy");
    // odd-even transposition: rounds alternate between even-indexed and
    // odd-indexed pairs, which keeps the pairs disjoint and sorts within M
    // rounds. Advancement shifts every pair's slot parity per admission tick,
    // so the tick count folds into the phase to keep alternating coverage in
    // the drones' own frame.
    int start = static_cast<int>((gossip_rounds_ + ticks_fired_) % 2);
    ++gossip_rounds_;
    std::vector<int> decisions;
    for (int k = start; k + 1 < slot_count(); k += 2) {
        std::int64_t a = occupant_[static_cast<std::size_t>(k)];
        std::int64_t b = occupant_[static_cast<std::size_t>(k + 1)];
        if (a < 0 || b < 0) continue;
        const Drone& da = drones.at(a);
        const Drone& db = drones.at(b);
        if (da.state != DroneState::Queued || db.state != DroneState::Queued) continue;
        if (!settled(da, pattern_.slots[static_cast<std::size_t>(k)]) ||
            !settled(db, pattern_.slots[static_cast<std::size_t>(k + 1)]))
            continue;
        if (da.remaining_flight_time > db.remaining_flight_time)
            decisions.push_back(k);
    }
    return decisions;
}

SwapPlan PatternQueue::execute_swap(DroneStore& drones, int k, double now) {
    if (k < 0 || k + 1 >= slot_count())
        throw IndexOutOfRange("swap pair out of range");
    std::int64_t a = occupant_[static_cast<std::size_t>(k)];
    std::int64_t b = occupant_[static_cast<std::size_t>(k + 1)];
    if (a < 0 || b < 0) throw SlotEmpty("both slots of a swap pair must be occupied");
    if (next_admission_time() - now + 1e-12 < policy_.swap_duration)
        throw SwapWindowTooShort("swap of slots " + std::to_string(k) + "," +
                                 std::to_string(k + 1) +
                                 " does not fit before the next admission");

    SwapPlan plan;
    plan.drone_a = a;
    plan.drone_b = b;
    plan.slot_low = k;
    plan.from_a = pattern_.slots[static_cast<std::size_t>(k)];
    plan.from_b = pattern_.slots[static_cast<std::size_t>(k + 1)];
    plan.distance = plan.from_a.distance_to(plan.from_b);
    plan.along = (plan.from_b - plan.from_a).normalized();
    Vec3 lat = pattern_.plane_normal.cross(plan.along);
    if (lat.norm() < 1e-9) {
        // leg parallel to the pattern normal (stacked junction): pick any
        // perpendicular deterministically
        Vec3 probe = std::abs(plan.along.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        lat = plan.along.cross(probe);
    }
    plan.lateral = lat.normalized();
    plan.offset = policy_.lateral_offset;
    plan.start_time = now;
    plan.duration = policy_.swap_duration;

    Drone& da = drones.at(a);
    Drone& db = drones.at(b);
    da.state = DroneState::Swapping;
    db.state = DroneState::Swapping;
    da.swap_partner = b;
    db.swap_partner = a;
    return plan;
}

void PatternQueue::finish_swap(DroneStore& drones, const SwapPlan& plan) {
    std::size_t lo = static_cast<std::size_t>(plan.slot_low);
    std::size_t hi = lo + 1;
    bool a_alive = occupant_[lo] == plan.drone_a;
    bool b_alive = occupant_[hi] == plan.drone_b;
    if (a_alive) occupant_[lo] = -1;
    if (b_alive) occupant_[hi] = -1;
    if (a_alive) {
        Drone& da = drones.at(plan.drone_a);
        occupant_[hi] = plan.drone_a;
        da.slot = plan.slot_low + 1;
        da.position = plan.from_b;
        da.state = DroneState::Queued;
        da.swap_partner = -1;
    }
    if (b_alive) {
        Drone& db = drones.at(plan.drone_b);
        occupant_[lo] = plan.drone_b;
        db.slot = plan.slot_low;
        db.position = plan.from_a;
        db.state = DroneState::Queued;
        db.swap_partner = -1;
    }
}

void PatternQueue::vacate(std::int64_t drone_id) {
    for (auto& v : occupant_)
        if (v == drone_id) v = -1;
}

void PatternQueue::check_invariants(const DroneStore& drones) const {
    std::vector<std::int64_t> seen;
    for (std::size_t k = 0; k < occupant_.size(); ++k) {
        std::int64_t id = occupant_[k];
        if (id < 0) continue;
        if (std::find(seen.begin(), seen.end(), id) != seen.end())
            throw Error("occupancy injectivity breach: drone " + std::to_string(id) +
                        " holds two slots");
        seen.push_back(id);
        const Drone& d = drones.at(id);
        if (d.terminal())
            throw Error("terminal drone " + std::to_string(id) + " still occupies a slot");
    }
    if (static_cast<int>(seen.size()) > slot_count())
        throw Error("occupancy exceeds slot count");
}

}  // namespace flightq
