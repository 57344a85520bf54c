#include "cpnconf/trading.hpp"

#include "cpnconf/errors.hpp"
#include "cpnconf/rng.hpp"

#include <algorithm>
#include <cstdio>

namespace cpnconf {

CPN build_reference_model() {
    CPN cpn;
    cpn.domains = {
        {"buy-order-ids", DomainKind::IdentifierSet},
        {"sell-order-ids", DomainKind::IdentifierSet},
        {"time", DomainKind::NaturalNumber},
        {"price", DomainKind::PositiveReal},
        {"quantity", DomainKind::NaturalNumber},
    };
    cpn.colors = {
        {"OB", {0, 2, 3, 4}, {"id", "tsub", "price", "qty"}},
        {"OS", {1, 2, 3, 4}, {"id", "tsub", "price", "qty"}},
    };
    cpn.places = {
        {"p1", 0, PlaceRole::Source}, {"p2", 1, PlaceRole::Source},
        {"p3", 0, PlaceRole::Internal}, {"p4", 1, PlaceRole::Internal},
        {"p5", 0, PlaceRole::Internal}, {"p6", 1, PlaceRole::Internal},
        {"p7", 0, PlaceRole::Sink}, {"p8", 1, PlaceRole::Sink},
    };

    PriorityRule price_time{{
        {"p5", *builtin_local_rule("price-time-buy")},
        {"p6", *builtin_local_rule("price-time-sell")},
    }};
    cpn.transitions = {
        {"t1", "submit buy order", std::nullopt},
        {"t2", "submit sell order", std::nullopt},
        {"t3", "new buy order", std::nullopt},
        {"t4", "new sell order", std::nullopt},
        {"t5", "trade1", price_time},
        {"t6", "trade2", price_time},
        {"t7", "trade3", price_time},
        {"t8", "cancel buy order", std::nullopt},
        {"t9", "cancel sell order", std::nullopt},
    };

    auto arc = [](std::string from, std::string to, const char* expr) {
        return Arc{std::move(from), std::move(to), parse_expression(expr)};
    };
    cpn.arcs = {
        arc("p1", "t1", "(b, ts, pr, q)"), arc("t1", "p3", "(b, ts, pr, q)"),
        arc("p2", "t2", "(s, ts, pr, q)"), arc("t2", "p4", "(s, ts, pr, q)"),
        arc("p3", "t3", "(b, ts, pr, q)"), arc("t3", "p5", "(b, ts, pr, q)"),
        arc("p4", "t4", "(s, ts, pr, q)"), arc("t4", "p6", "(s, ts, pr, q)"),

        arc("p5", "t5", "(b, ts1, pr1, q1)"), arc("p6", "t5", "(s, ts2, pr2, q2)"),
        arc("t5", "p7", "(b, ts1, pr1, 0)"), arc("t5", "p8", "(s, ts2, pr2, 0)"),

        arc("p5", "t6", "(b, ts1, pr1, q1)"), arc("p6", "t6", "(s, ts2, pr2, q2)"),
        arc("t6", "p5", "(b, ts1, pr1, q1 - q2)"), arc("t6", "p8", "(s, ts2, pr2, 0)"),

        arc("p5", "t7", "(b, ts1, pr1, q1)"), arc("p6", "t7", "(s, ts2, pr2, q2)"),
        arc("t7", "p7", "(b, ts1, pr1, 0)"), arc("t7", "p6", "(s, ts2, pr2, q2 - q1)"),

        arc("p5", "t8", "(b, ts, pr, q)"), arc("t8", "p7", "(b, ts, pr, q)"),
        arc("p6", "t9", "(s, ts, pr, q)"), arc("t9", "p8", "(s, ts, pr, q)"),
    };
    cpn.initial_marking.resize(cpn.places.size());
    return cpn;
}

namespace {

void require_rate(double rate, const char* name) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0,1], got " + std::to_string(rate));
    }
}

}  // namespace

void SimConfig::validate() const {
    require_rate(skip_submission_rate, "skip_submission_rate");
    if (skip_submission_buy) require_rate(*skip_submission_buy, "skip_submission_buy");
    if (skip_submission_sell) require_rate(*skip_submission_sell, "skip_submission_sell");
    require_rate(sell_deadlock_rate, "sell_deadlock_rate");
    require_rate(corruption_rate, "corruption_rate");
    require_rate(rule_violation_rate, "rule_violation_rate");
    if (!(buy_orders_per_trace >= 0.0) || !(sell_orders_per_trace >= 0.0)) {
        throw ConfigError("order means must be non-negative");
    }
    if (traces > 0 && buy_orders_per_trace + sell_orders_per_trace <= 0.0) {
        throw ConfigError("at least one side needs a positive order mean");
    }
    if (!(price_min > 0.0)) throw ConfigError("price_min must be positive");
    if (!(price_step >= 0.0)) throw ConfigError("price_step must be non-negative");
    if (price_levels == 0) throw ConfigError("price_levels must be at least 1");
    if (qty_min < 1) throw ConfigError("qty_min must be at least 1");
    if (qty_max < qty_min) throw ConfigError("qty_max must be >= qty_min");
}

SimConfig SimConfig::experiment_defaults() {
    SimConfig cfg;
    cfg.skip_submission_rate = 0.5;
    cfg.sell_deadlock_rate = 0.2;
    return cfg;
}

SimConfig SimConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    SimConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "traces") cfg.traces = value.get<std::size_t>();
            else if (key == "buy_orders_per_trace") cfg.buy_orders_per_trace = value.get<double>();
            else if (key == "sell_orders_per_trace") cfg.sell_orders_per_trace = value.get<double>();
            else if (key == "price_min") cfg.price_min = value.get<double>();
            else if (key == "price_step") cfg.price_step = value.get<double>();
            else if (key == "price_levels") cfg.price_levels = value.get<std::size_t>();
            else if (key == "qty_min") cfg.qty_min = value.get<std::int64_t>();
            else if (key == "qty_max") cfg.qty_max = value.get<std::int64_t>();
            else if (key == "seed") cfg.rng_seed = value.get<std::uint64_t>();
            else if (key == "skip_submission_rate") cfg.skip_submission_rate = value.get<double>();
            else if (key == "skip_submission_buy") cfg.skip_submission_buy = value.get<double>();
            else if (key == "skip_submission_sell") cfg.skip_submission_sell = value.get<double>();
            else if (key == "sell_deadlock_rate") cfg.sell_deadlock_rate = value.get<double>();
            else if (key == "corruption_rate") cfg.corruption_rate = value.get<double>();
            else if (key == "rule_violation_rate") cfg.rule_violation_rate = value.get<double>();
            else throw ConfigError("unknown config key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }
    cfg.validate();
    return cfg;
}

nlohmann::ordered_json SimConfig::to_json() const {
    nlohmann::ordered_json doc;
    doc["traces"] = traces;
    doc["buy_orders_per_trace"] = buy_orders_per_trace;
    doc["sell_orders_per_trace"] = sell_orders_per_trace;
    doc["price_min"] = price_min;
    doc["price_step"] = price_step;
    doc["price_levels"] = price_levels;
    doc["qty_min"] = qty_min;
    doc["qty_max"] = qty_max;
    doc["seed"] = rng_seed;
    doc["skip_submission_rate"] = skip_submission_rate;
    if (skip_submission_buy) doc["skip_submission_buy"] = *skip_submission_buy;
    if (skip_submission_sell) doc["skip_submission_sell"] = *skip_submission_sell;
    doc["sell_deadlock_rate"] = sell_deadlock_rate;
    doc["corruption_rate"] = corruption_rate;
    doc["rule_violation_rate"] = rule_violation_rate;
    return doc;
}

namespace {

struct Order {
    std::string id;
    std::int64_t tsub = 0;
    double price = 0.0;
    std::int64_t qty = 0;
    bool is_buy = false;
    bool skip = false;      // enters the book without a submit event
    bool deadlock = false;  // sell that stops after its new event
    bool in_book = false;
    bool tainted = false;   // a corrupted emission desynced its replayed state
};

std::string clock_ts(std::size_t seq) {
    // 09:00:00 plus one second per event; cosmetic but deterministic.
    std::size_t total = 9 * 3600 + seq;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu:%02zu:%02zu", (total / 3600) % 24, (total / 60) % 60,
                  total % 60);
    return buf;
}

ObjectState order_state(const Order& o) {
    return {o.is_buy ? "OB" : "OS",
            Token{Value(o.id), Value(o.tsub), Value(o.price), Value(o.qty)}};
}

// Matchable = resting, and not a deadlocked sell.
bool matchable(const Order& o) { return o.in_book && !o.deadlock; }

// Price-time winner on one side; buys prefer high prices, sells low, ties to
// the earlier arrival. tsub is unique per trace, so the winner is unique.
Order* best_order(std::vector<Order>& orders, bool buys, const Order* exclude,
                  std::optional<double> max_price) {
    Order* best = nullptr;
    for (Order& o : orders) {
        if (o.is_buy != buys || !matchable(o) || &o == exclude) continue;
        if (max_price && o.price > *max_price) continue;
        if (best == nullptr) {
            best = &o;
            continue;
        }
        bool wins = buys ? (o.price > best->price ||
                            (o.price == best->price && o.tsub < best->tsub))
                         : (o.price < best->price ||
                            (o.price == best->price && o.tsub < best->tsub));
        if (wins) best = &o;
    }
    return best;
}

struct TraceBuilder {
    Trace trace;
    std::size_t next_seq = 1;

    void emit(const std::string& activity, std::vector<ObjectState> objects) {
        EventRecord event;
        event.seq = next_seq;
        event.timestamp = clock_ts(next_seq);
        event.activity = activity;
        event.objects = std::move(objects);
        std::sort(event.objects.begin(), event.objects.end(),
                  [](const ObjectState& a, const ObjectState& b) {
                      return compare_values(a.id(), b.id()) < 0;
                  });
        trace.events.push_back(std::move(event));
        ++next_seq;
    }
};

Trace simulate_trace(const SimConfig& cfg, std::size_t index, GenerationStats& stats) {
    std::mt19937_64 rng(mix_seed(cfg.rng_seed, index));

    int buys = 0, sells = 0;
    do {
        buys = poisson(rng, cfg.buy_orders_per_trace);
        sells = poisson(rng, cfg.sell_orders_per_trace);
    } while (buys + sells == 0);

    // Arrival plan: shuffle the side sequence, then deal ids per side in
    // arrival order.
    std::vector<bool> arrival_is_buy(static_cast<std::size_t>(buys), true);
    arrival_is_buy.insert(arrival_is_buy.end(), static_cast<std::size_t>(sells), false);
    for (std::size_t i = arrival_is_buy.size(); i > 1; --i) {
        std::size_t j = uniform_below(rng, i);
        std::swap(arrival_is_buy[i - 1], arrival_is_buy[j]);
    }

    std::vector<Order> orders;
    orders.reserve(arrival_is_buy.size());
    int buy_no = 0, sell_no = 0;
    for (std::size_t pos = 0; pos < arrival_is_buy.size(); ++pos) {
        Order o;
        o.is_buy = arrival_is_buy[pos];
        o.id = (o.is_buy ? "b" : "s") + std::to_string(o.is_buy ? ++buy_no : ++sell_no);
        o.tsub = static_cast<std::int64_t>(pos) + 1;
        o.price = cfg.price_min + cfg.price_step *
                                      static_cast<double>(uniform_below(rng, cfg.price_levels));
        o.qty = uniform_int(rng, cfg.qty_min, cfg.qty_max);
        o.skip = bernoulli(rng, o.is_buy ? cfg.buy_skip() : cfg.sell_skip());
        o.deadlock = !o.is_buy && bernoulli(rng, cfg.sell_deadlock_rate);
        orders.push_back(std::move(o));
    }

    char trace_name[16];
    std::snprintf(trace_name, sizeof trace_name, "ob%03zu", index + 1);
    TraceBuilder out;
    out.trace.trace_id = trace_name;

    for (Order& arriving : orders) {
        if (arriving.skip) {
            stats.skipped_buy += arriving.is_buy ? 1 : 0;
            stats.skipped_sell += arriving.is_buy ? 0 : 1;
        } else {
            out.emit(arriving.is_buy ? "submit buy order" : "submit sell order",
                     {order_state(arriving)});
        }
        out.emit(arriving.is_buy ? "new buy order" : "new sell order", {order_state(arriving)});
        arriving.in_book = true;
        if (arriving.deadlock) stats.deadlocked_sells += 1;

        for (;;) {
            Order* buy = best_order(orders, true, nullptr, std::nullopt);
            Order* sell = best_order(orders, false, nullptr, std::nullopt);
            if (buy == nullptr || sell == nullptr || buy->price < sell->price) break;

            if (cfg.rule_violation_rate > 0.0 && bernoulli(rng, cfg.rule_violation_rate)) {
                // Match a crossing sell that price-time priority would not
                // pick; without a second crossing sell the draw lapses.
                Order* alt = best_order(orders, false, sell, buy->price);
                if (alt != nullptr) {
                    sell = alt;
                    stats.forced_mismatches += 1;
                }
            }

            const char* activity = nullptr;
            if (buy->qty == sell->qty) {
                activity = "trade1";
                buy->qty = 0;
                sell->qty = 0;
                buy->in_book = false;
                sell->in_book = false;
            } else if (buy->qty > sell->qty) {
                activity = "trade2";
                buy->qty -= sell->qty;
                sell->qty = 0;
                sell->in_book = false;
            } else {
                activity = "trade3";
                sell->qty -= buy->qty;
                buy->qty = 0;
                buy->in_book = false;
            }

            ObjectState buy_state = order_state(*buy);
            ObjectState sell_state = order_state(*sell);
            if (cfg.corruption_rate > 0.0 && !buy->tainted && !sell->tainted &&
                bernoulli(rng, cfg.corruption_rate)) {
                Order* victim = uniform_below(rng, 2) == 0 ? buy : sell;
                ObjectState& emitted = victim == buy ? buy_state : sell_state;
                if (uniform_below(rng, 2) == 0) {
                    emitted.values[2] = std::get<double>(emitted.values[2]) + 1.0;  // price
                } else {
                    emitted.values[3] = std::get<std::int64_t>(emitted.values[3]) + 1;  // qty
                }
                victim->tainted = true;
                stats.corrupted_events += 1;
                stats.corruption_sites.emplace_back(out.trace.trace_id, out.next_seq);
            }
            out.emit(activity, {std::move(buy_state), std::move(sell_state)});
        }
    }

    for (Order& o : orders) {
        if (!o.in_book || o.deadlock) continue;
        out.emit(o.is_buy ? "cancel buy order" : "cancel sell order", {order_state(o)});
        o.in_book = false;
    }

    stats.total_events += out.trace.events.size();
    return out.trace;
}

}  // namespace

GeneratedLog generate_log(const SimConfig& config) {
    config.validate();
    GeneratedLog out;
    out.log.traces.reserve(config.traces);
    for (std::size_t i = 0; i < config.traces; ++i) {
        out.log.traces.push_back(simulate_trace(config, i, out.stats));
    }
    return out;
}

}  // namespace cpnconf
