#include <random>

#include "doctest.h"
#include "flightq/dispatch.hpp"

using namespace flightq;

namespace {

Opening make_opening(int id, Vec3 pos, double lambda, int queue_fill, int slots = 8) {
    PatternSpec s;
    s.shape = CircleSpec{0.5, slots};
    s.anchor = pos;
    Opening o;
    o.id = id;
    o.position = pos;
    o.lambda = lambda;
    o.queue = PatternQueue(build_pattern(s), lambda, {});
    static DroneStore scratch;  // occupancy only needs ids
    for (int i = 0; i < queue_fill; ++i) {
        Drone d;
        Drone& nd = scratch.spawn(std::move(d));
        REQUIRE(o.queue.enqueue(nd).has_value());
    }
    return o;
}

Drone drone_at(Vec3 pos, double rft = 1e9, std::string cls = "") {
    Drone d;
    d.id = 0;
    d.position = pos;
    d.v_max = 1.0;
    d.remaining_flight_time = rft;
    d.drone_class = std::move(cls);
    return d;
}

}  // namespace

TEST_CASE("rate conservation is validated exactly") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {0, 0, 0}, 0.4, 0));
    openings.push_back(make_opening(2, {4, 0, 0}, 0.6, 0));
    CHECK_NOTHROW(validate_rates(openings, 1.0));

    openings[1].lambda = 0.5;
    openings[1].lambda = 0.6;
    openings[0].lambda = 0.5;
    try {
        validate_rates(openings, 1.0);
        FAIL("expected RateMismatch");
    } catch (const RateMismatch& e) {
        CHECK(e.residual == doctest::Approx(0.1));
    }

    std::vector<Opening> single;
    single.push_back(make_opening(1, {0, 0, 0}, 2.5, 0));
    CHECK_NOTHROW(validate_rates(single, 2.5));
}

TEST_CASE("shared mode goes to the shortest queue when everything else ties") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {5, 0, 0}, 1.0, 3));
    openings.push_back(make_opening(2, {-5, 0, 0}, 1.0, 1));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Shared;
    cfg.lambda_total = 2.0;
    Dispatcher dsp(cfg);

    Drone d = drone_at({0, 0, 0});
    auto dec = dsp.assign(d, openings);
    CHECK(dec.opening_id == 2);
    CHECK(dec.estimated_wait == doctest::Approx(1.0));
    CHECK(dec.feasible);
}

TEST_CASE("exact cost ties break toward the lowest opening id") {
    // Q1=4 at lambda 2 waits 2 s; Q2=1 at lambda 0.5 waits 2 s; equidistant
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {3, 0, 0}, 2.0, 4));
    openings.push_back(make_opening(2, {-3, 0, 0}, 0.5, 1));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Shared;
    cfg.lambda_total = 2.5;
    Dispatcher dsp(cfg);

    auto dec = dsp.assign(drone_at({0, 0, 0}), openings);
    CHECK(dec.opening_id == 1);
    CHECK(dec.estimated_wait == doctest::Approx(2.0));
}

TEST_CASE("exclusive mode is a partition lookup, queue lengths ignored") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {3, 0, 0}, 1.0, 0));
    openings.push_back(make_opening(3, {9, 0, 0}, 1.0, 7));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Exclusive;
    cfg.partition = {{"low-battery", 3}, {"bulk", 1}};
    Dispatcher dsp(cfg);

    auto dec = dsp.assign(drone_at({0, 0, 0}, 1e9, "low-battery"), openings);
    CHECK(dec.opening_id == 3);

    CHECK_THROWS_AS(dsp.assign(drone_at({0, 0, 0}, 1e9, "unknown"), openings),
                    UnmappedDroneClass);
}

TEST_CASE("empty opening set is rejected") {
    Dispatcher dsp(DispatchConfig{});
    std::vector<Opening> none;
    CHECK_THROWS_AS(dsp.assign(drone_at({0, 0, 0}), none), EmptyOpeningSet);
}

TEST_CASE("infeasible drones are still routed to the least-bad opening") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {100, 0, 0}, 0.1, 6));
    openings.push_back(make_opening(2, {200, 0, 0}, 0.1, 6));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Shared;
    cfg.lambda_total = 0.2;
    Dispatcher dsp(cfg);

    auto dec = dsp.assign(drone_at({0, 0, 0}, 5.0), openings);  // 5 s battery
    CHECK(dec.opening_id == 1);
    CHECK_FALSE(dec.feasible);
}

TEST_CASE("release closes exactly one open assignment") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {3, 0, 0}, 1.0, 0));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Shared;
    cfg.lambda_total = 1.0;
    Dispatcher dsp(cfg);

    Drone d = drone_at({0, 0, 0});
    d.id = 42;
    auto dec = dsp.assign(d, openings);
    CHECK(dsp.has_open_assignment(42));
    CHECK_NOTHROW(dsp.release(dec.opening_id, 42));
    CHECK_FALSE(dsp.has_open_assignment(42));
    CHECK_THROWS_AS(dsp.release(dec.opening_id, 42), UnknownAssignment);
    CHECK_THROWS_AS(dsp.release(dec.opening_id, 7), UnknownAssignment);
}

TEST_CASE("hybrid with one all-openings shared group reduces to plain shared") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Opening> openings;
        int n = 2 + static_cast<int>(u(rng) * 3);
        double lambda_total = 0.0;
        for (int i = 0; i < n; ++i) {
            double lam = 0.5 + u(rng);
            lambda_total += lam;
            openings.push_back(make_opening(i, {u(rng) * 10 - 5, u(rng) * 10 - 5, 0},
                                            lam, static_cast<int>(u(rng) * 6)));
        }

        DispatchConfig shared;
        shared.mode = DispatchMode::Shared;
        shared.lambda_total = lambda_total;

        DispatchConfig hybrid;
        hybrid.mode = DispatchMode::Hybrid;
        HybridGroup g;
        g.mode = DispatchMode::Shared;
        g.lambda_total = lambda_total;
        g.classes = {""};
        for (const auto& o : openings) g.openings.push_back(o.id);
        hybrid.groups.push_back(g);

        Drone d = drone_at({u(rng) * 8 - 4, u(rng) * 8 - 4, 0}, 30.0 + u(rng) * 300);
        Dispatcher ds(shared);
        Dispatcher dh(hybrid);
        auto a = ds.assign(d, openings);
        auto b = dh.assign(d, openings);
        CHECK(a.opening_id == b.opening_id);
        CHECK(a.estimated_wait == b.estimated_wait);
        CHECK(a.travel_time == b.travel_time);
        CHECK(a.feasible == b.feasible);
    }
}

TEST_CASE("hybrid exclusive group pins a class to its opening") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(0, {3, 0, 0}, 1.0, 0));
    openings.push_back(make_opening(1, {-3, 0, 0}, 1.0, 5));
    openings.push_back(make_opening(2, {0, 3, 0}, 1.0, 0));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Hybrid;
    HybridGroup shared_group;
    shared_group.mode = DispatchMode::Shared;
    shared_group.openings = {0, 1};
    shared_group.classes = {"bulk"};
    shared_group.lambda_total = 2.0;
    HybridGroup exclusive_group;
    exclusive_group.mode = DispatchMode::Exclusive;
    exclusive_group.openings = {2};
    exclusive_group.classes = {"vip"};
    exclusive_group.partition = {{"vip", 2}};
    cfg.groups = {shared_group, exclusive_group};
    Dispatcher dsp(cfg);

    CHECK(dsp.assign(drone_at({0, 0, 0}, 1e9, "bulk"), openings).opening_id == 0);
    CHECK(dsp.assign(drone_at({0, 0, 0}, 1e9, "vip"), openings).opening_id == 2);
    CHECK_THROWS_AS(dsp.assign(drone_at({0, 0, 0}, 1e9, "stray"), openings),
                    UnmappedDroneClass);
}

TEST_CASE("count_inbound folds en-route drones into the wait estimate") {
    std::vector<Opening> openings;
    openings.push_back(make_opening(1, {3, 0, 0}, 1.0, 1));
    openings.push_back(make_opening(2, {-3, 0, 0}, 1.0, 1));
    DispatchConfig cfg;
    cfg.mode = DispatchMode::Shared;
    cfg.lambda_total = 2.0;
    cfg.count_inbound = true;
    Dispatcher dsp(cfg);

    // three drones already heading for opening 1 tip the balance to opening 2
    std::vector<int> inbound = {3, 0};
    auto dec = dsp.assign(drone_at({0, 0, 0}), openings, inbound);
    CHECK(dec.opening_id == 2);
    CHECK(dec.estimated_wait == doctest::Approx(1.0));

    cfg.count_inbound = false;
    Dispatcher plain(cfg);
    auto dec2 = plain.assign(drone_at({0, 0, 0}), openings, inbound);
    CHECK(dec2.opening_id == 1);  // equal cost, lowest id wins
}

TEST_CASE("argmin matches a brute-force cost scan") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Opening> openings;
        int n = 1 + static_cast<int>(u(rng) * 4);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double lam = 0.2 + u(rng) * 2.0;
            total += lam;
            openings.push_back(make_opening(i, {u(rng) * 20 - 10, u(rng) * 20 - 10, 0},
                                            lam, static_cast<int>(u(rng) * 8)));
        }
        DispatchConfig cfg;
        cfg.mode = DispatchMode::Shared;
        cfg.lambda_total = total;
        cfg.w_wait = 0.5 + u(rng);
        cfg.w_travel = 0.5 + u(rng);
        Dispatcher dsp(cfg);

        Drone d = drone_at({u(rng) * 10 - 5, u(rng) * 10 - 5, 0}, 1e9);
        auto dec = dsp.assign(d, openings);

        double best = 1e300;
        int best_id = -1;
        for (const auto& o : openings) {
            double wait = o.queue.occupancy_size() / o.lambda;
            double travel = d.position.distance_to(o.position) / d.v_max;
            double cost = cfg.w_wait * wait + cfg.w_travel * travel;
            if (cost < best) {
                best = cost;
                best_id = o.id;
            }
        }
        CHECK(dec.opening_id == best_id);
    }
}
