#include "cpnconf/errors.hpp"
#include "cpnconf/model_io.hpp"
#include "cpnconf/trading.hpp"
#include "cpnconf/util.hpp"
#include "cpnconf/validation.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cpnconf;

TEST_CASE("the reference model survives a JSON round-trip unchanged") {
    CPN original = build_reference_model();
    nlohmann::ordered_json j = model_to_json(original);
    CPN back = model_from_json(j);
    CHECK(back == original);

    // And a second trip through actual text.
    nlohmann::ordered_json j2 = nlohmann::ordered_json::parse(j.dump(2));
    CHECK(model_from_json(j2) == original);
}

TEST_CASE("builtin priority rules serialize by name") {
    nlohmann::ordered_json j = model_to_json(build_reference_model());
    bool saw_builtin = false;
    for (const auto& t : j.at("transitions")) {
        if (t.contains("priority_rule")) {
            for (const auto& [place, rule] : t.at("priority_rule").items()) {
                if (rule.is_string()) saw_builtin = true;
            }
        }
    }
    CHECK(saw_builtin);
}

TEST_CASE("custom key lists round-trip too") {
    CPN cpn = build_reference_model();
    LocalRule custom{"custom", {{"qty", SortDirection::Descending},
                                {"tsub", SortDirection::Ascending}}};
    cpn.transitions[4].priority_rule->local_rules["p5"] = custom;
    CPN back = model_from_json(model_to_json(cpn));
    const LocalRule* r = back.transitions[4].priority_rule->rule_for("p5");
    REQUIRE(r != nullptr);
    REQUIRE(r->keys.size() == 2);
    CHECK(r->keys[0] == std::pair<std::string, SortDirection>{"qty", SortDirection::Descending});
    CHECK(r->keys[1] == std::pair<std::string, SortDirection>{"tsub", SortDirection::Ascending});
}

TEST_CASE("the bundled model file matches the built-in definition") {
    std::filesystem::path path =
        std::filesystem::path(CPNCONF_SOURCE_DIR) / "models" / "trading_reference.json";
    REQUIRE(std::filesystem::exists(path));
    CPN loaded = load_model(path);
    CHECK(loaded == build_reference_model());
    CHECK(validate_syntax(loaded).ok());
    CHECK(validate_conservative_workflow(loaded).ok());
}

TEST_CASE("save then load is the identity on disk") {
    CPN cpn = build_reference_model();
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "cpnconf_model_roundtrip.json";
    save_model(cpn, tmp);
    CHECK(load_model(tmp) == cpn);
    std::filesystem::remove(tmp);
}

TEST_CASE("unresolvable references fail with a located parse error") {
    nlohmann::ordered_json j = model_to_json(build_reference_model());
    j["places"][0]["color"] = "NoSuchColor";
    CHECK_THROWS_AS(model_from_json(j), ParseError);

    nlohmann::ordered_json j2 = model_to_json(build_reference_model());
    j2["colors"][0]["domains"][0] = "no-such-domain";
    CHECK_THROWS_AS(model_from_json(j2), ParseError);

    nlohmann::ordered_json j3 = model_to_json(build_reference_model());
    j3.erase("places");
    CHECK_THROWS_AS(model_from_json(j3), ParseError);
}

TEST_CASE("unknown builtin rule names are a configuration error") {
    nlohmann::ordered_json j = model_to_json(build_reference_model());
    for (auto& t : j.at("transitions")) {
        if (t.contains("priority_rule")) {
            for (auto& [place, rule] : t.at("priority_rule").items()) {
                if (rule.is_string()) rule = "price-time-sideways";
            }
            break;
        }
    }
    CHECK_THROWS_AS(model_from_json(j), ConfigError);
}

TEST_CASE("malformed JSON names the file in the error") {
    std::filesystem::path tmp = std::filesystem::temp_directory_path() / "cpnconf_broken.json";
    write_text_file(tmp, "{ not json");
    try {
        load_model(tmp);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("cpnconf_broken.json") != std::string::npos);
    }
    std::filesystem::remove(tmp);
}

TEST_CASE("initial markings serialize when present") {
    CPN cpn = build_reference_model();
    cpn.initial_marking.add(*cpn.place_index("p1"),
                            Token{Value(std::string("b1")), Value(std::int64_t{1}), Value(22.0),
                                  Value(std::int64_t{5})});
    CPN back = model_from_json(model_to_json(cpn));
    CHECK(back == cpn);
    CHECK(back.initial_marking.tokens(*back.place_index("p1")).size() == 1);
}
