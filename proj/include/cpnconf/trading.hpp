#pragma once

#include "cpnconf/cpn.hpp"
#include "cpnconf/event_log.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cpnconf {

// The bundled order-book net: places p1..p8, transitions t1..t9, colors
// OB/OS with attributes {id, tsub, price, qty}, and price-time priority
// rules on the three trade transitions.
//
//   p1 -t1(submit buy)-> p3 -t3(new buy)-> p5 --. t5/t6/t7 (trades)
//   p2 -t2(submit sell)-> p4 -t4(new sell)-> p6 -' t8/t9 (cancels)
//   sinks: p7 (buys), p8 (sells)
CPN build_reference_model();

// Log-generator configuration. Orders arrive in random interleaving with
// consecutive tsub; prices sample a uniform grid, quantities a uniform
// integer range. Fault rates inject the four deviation kinds.
struct SimConfig {
    std::size_t traces = 100;
    double buy_orders_per_trace = 10.0;  // Poisson means; a trace resamples
    double sell_orders_per_trace = 10.0; // until at least one order exists
    double price_min = 20.0;
    double price_step = 0.5;
    std::size_t price_levels = 9;
    std::int64_t qty_min = 1;
    std::int64_t qty_max = 5;
    std::uint64_t rng_seed = 42;

    // Orders entering the book with no submit event. The per-side overrides
    // fall back to the shared rate when unset.
    double skip_submission_rate = 0.0;
    std::optional<double> skip_submission_buy;
    std::optional<double> skip_submission_sell;

    double sell_deadlock_rate = 0.0;   // sells that stop after their new event
    double corruption_rate = 0.0;      // trades whose emitted state is perturbed
    double rule_violation_rate = 0.0;  // trades matching a non-best sell

    double buy_skip() const { return skip_submission_buy.value_or(skip_submission_rate); }
    double sell_skip() const { return skip_submission_sell.value_or(skip_submission_rate); }

    // ConfigError on rates outside [0,1], non-positive prices, empty grids,
    // or an inverted quantity range.
    void validate() const;

    // The desk-scale faulty-system setup: 100 traces, ~10 orders per side,
    // half of each side skipping submission, a fifth of sells deadlocking.
    static SimConfig experiment_defaults();

    static SimConfig from_json(const nlohmann::json& doc);
    nlohmann::ordered_json to_json() const;
};

// Injection bookkeeping for fault-detectability tests: each count is the
// number of faults actually placed, not the configured rate.
struct GenerationStats {
    std::size_t skipped_buy = 0;
    std::size_t skipped_sell = 0;
    std::size_t deadlocked_sells = 0;
    std::size_t corrupted_events = 0;
    std::size_t forced_mismatches = 0;  // trades matched against a non-best sell
    std::size_t total_events = 0;
    std::vector<std::pair<std::string, std::size_t>> corruption_sites;  // (trace id, seq)

    std::size_t skipped_submissions() const { return skipped_buy + skipped_sell; }
};

struct GeneratedLog {
    EventLog log;
    GenerationStats stats;
};

// Price-time-priority matching simulation, deterministic per seed. Trace i
// runs on its own stream derived from rng_seed, so the trace count can change
// without reshuffling existing traces.
GeneratedLog generate_log(const SimConfig& config);

}  // namespace cpnconf
