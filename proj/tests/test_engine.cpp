#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "routerq/engine.hpp"

using namespace routerq;

TEST_CASE("events pop in (time, seq) order") {
  Engine eng;
  eng.schedule_arrival(2.0, 10);  // seq 0
  eng.schedule_arrival(1.0, 20);  // seq 1
  eng.schedule_arrival(1.0, 30);  // seq 2

  auto e1 = eng.next_event();
  REQUIRE(e1.has_value());
  CHECK(e1->time == 1.0);
  CHECK(e1->stream == 20);
  auto e2 = eng.next_event();
  CHECK(e2->time == 1.0);
  CHECK(e2->stream == 30);
  auto e3 = eng.next_event();
  CHECK(e3->time == 2.0);
  CHECK(e3->stream == 10);
  CHECK(eng.clock() == 2.0);
  CHECK(!eng.next_event().has_value());
}

TEST_CASE("sequence numbers are unique and increasing") {
  Engine eng;
  for (int i = 0; i < 10; ++i) eng.schedule_arrival(1.0, 0);
  std::uint64_t prev = 0;
  for (int i = 0; i < 10; ++i) {
    auto ev = eng.next_event();
    REQUIRE(ev.has_value());
    if (i > 0) CHECK(ev->seq > prev);
    prev = ev->seq;
  }
}

TEST_CASE("scheduling into the past is a fatal logic error") {
  Engine eng;
  eng.schedule_arrival(3.0, 0);
  eng.next_event();  // clock -> 3
  CHECK(eng.clock() == 3.0);
  CHECK_NOTHROW(eng.schedule_arrival(3.0, 0));  // zero-delay events are legal
  CHECK_NOTHROW(eng.schedule_arrival(5.0, 0));
  CHECK_THROWS_AS(eng.schedule_arrival(2.0, 0), std::logic_error);
}

TEST_CASE("arrival-count stop rule") {
  SUBCASE("zero arrivals returns immediately") {
    Engine eng;
    eng.schedule_arrival(1.0, 0);
    int dispatched = 0;
    eng.run([&](const Event&) { ++dispatched; }, StopRule::arrivals(0));
    CHECK(dispatched == 0);
    CHECK(eng.clock() == 0.0);
  }

  SUBCASE("self-rescheduling stream stops at exactly the limit") {
    Engine eng;
    eng.schedule_arrival(1.0, 0);
    std::uint64_t arrivals = 0;
    eng.run(
        [&](const Event& ev) {
          REQUIRE(ev.kind == EventKind::ExternalArrival);
          ++arrivals;
          eng.schedule_arrival(ev.time + 1.0, 0);
        },
        StopRule::arrivals(100));
    CHECK(arrivals == 100);
    CHECK(eng.arrivals_dispatched() == 100);
    CHECK(eng.clock() == 100.0);
  }
}

TEST_CASE("time-horizon stop rule dispatches nothing beyond the horizon") {
  Engine eng;
  for (int i = 1; i <= 10; ++i) eng.schedule_arrival(double(i), 0);
  double last = 0.0;
  int dispatched = 0;
  eng.run(
      [&](const Event& ev) {
        last = ev.time;
        ++dispatched;
      },
      StopRule::time_horizon(5.0));
  CHECK(dispatched == 5);
  CHECK(last == 5.0);
  CHECK(eng.pending_count() == 5);
}

TEST_CASE("dispatch clock never decreases") {
  Engine eng;
  eng.schedule_arrival(0.5, 0);
  double prev = -1.0;
  eng.run(
      [&](const Event& ev) {
        CHECK(ev.time >= prev);
        prev = ev.time;
        if (eng.arrivals_dispatched() < 50)
          eng.schedule_arrival(ev.time, 0);  // zero-delay chain still ordered
      },
      StopRule::arrivals(50));
  CHECK(eng.arrivals_dispatched() == 50);
}

TEST_CASE("identical schedules replay identically") {
  auto trace = [] {
    Engine eng;
    eng.schedule_arrival(2.0, 1);
    eng.schedule_arrival(1.0, 2);
    eng.schedule_completion(1.0, 3, 4, 5);
    std::vector<std::pair<double, std::uint64_t>> out;
    while (auto ev = eng.next_event()) out.emplace_back(ev->time, ev->seq);
    return out;
  };
  CHECK(trace() == trace());
}
