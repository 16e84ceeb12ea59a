#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "usfm/error.hpp"
#include "usfm/lca/assess.hpp"
#include "usfm/lca/inventory.hpp"

using namespace usfm;
using namespace usfm::lca;

namespace {

const char* kInventoryHeader = "fu_name,fu_amount,fu_unit,parts_per_fu\n";
const char* kFlowHeader = "flow_name,amount,unit,direction\n";
const char* kMatrixHeader = "category,category_unit,flow_name,factor\n";

Inventory tiny_inventory() {
    return parse_inventory(std::string(kInventoryHeader) +
                               "Widget,1,kg,4\n" + kFlowHeader +
                               "steel,2.0,kg,input\n"
                               "electricity,1.6,kWh,input\n"
                               "scrap,-0.1,kg,output\n",
                           "tiny");
}

// independent restatement: per category, loop the matrix rows over every flow
std::map<std::string, double> oracle_scores(const Inventory& inv,
                                            const CharacterizationMatrix& m) {
    std::map<std::string, double> totals;
    for (const auto& [category, flows] : m.factors) {
        double sum = 0.0;
        std::vector<const Flow*> ordered;
        for (const Flow& f : inv.flows) ordered.push_back(&f);
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const Flow* a, const Flow* b) { return a->name < b->name; });
        for (const Flow* f : ordered) {
            const auto it = flows.find(f->name);
            if (it != flows.end()) sum += it->second * f->amount;
        }
        totals[category] = sum;
    }
    return totals;
}

const char* kNamePool[] = {"steel", "copper", "electricity", "water", "solder",
                           "nitrogen", "flux", "dross", "heat", "argon",
                           "board", "paste"};

Inventory random_inventory(testutil::Rng& rng) {
    Inventory inv;
    inv.fu = {"FU", 1.0, "kg", 1};
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
        Flow f;
        f.name = kNamePool[rng.below(std::size(kNamePool))];
        f.amount = (rng.unit() - 0.5) * 10.0;
        f.unit = "kg";
        f.direction = rng.chance(0.5) ? FlowDirection::Input : FlowDirection::Output;
        inv.flows.push_back(std::move(f));
    }
    return inv;
}

CharacterizationMatrix random_matrix(testutil::Rng& rng, bool full_coverage) {
    CharacterizationMatrix m;
    const int categories = 1 + static_cast<int>(rng.below(4));
    for (int c = 0; c < categories; ++c) {
        const std::string name = "cat" + std::to_string(c);
        m.category_units[name] = "eq";
        for (const char* flow : kNamePool)
            if (full_coverage || rng.chance(0.7))
                m.factors[name][flow] = (rng.unit() - 0.5) * 4.0;
        if (m.factors[name].empty()) m.factors[name][kNamePool[0]] = 1.0;
    }
    return m;
}

}  // namespace

TEST_CASE("inventories parse with their functional unit block") {
    const Inventory inv = load_inventory(testutil::fixture("lca/pcb_inventory.csv"));
    CHECK(inv.fu.name == "PCB Assembly");
    CHECK(inv.fu.amount == 1.0);
    CHECK(inv.fu.unit == "kg");
    CHECK(inv.fu.parts_per_fu == 5);
    REQUIRE(inv.flows.size() == 26);

    int inputs = 0, outputs = 0, negative = 0, electricity = 0;
    for (const Flow& f : inv.flows) {
        (f.direction == FlowDirection::Input ? inputs : outputs) += 1;
        negative += f.amount < 0.0;
        electricity += f.name == "electricity, medium voltage";
    }
    CHECK(inputs == 24);
    CHECK(outputs == 2);
    CHECK(negative == 2);   // two credit rows carry negative amounts
    CHECK(electricity == 2);  // background grid row plus the metered foreground row

    const Flow& factory = *std::find_if(inv.flows.begin(), inv.flows.end(), [](const Flow& f) {
        return f.name == "electronic component factory";
    });
    CHECK(factory.amount == 1.15e-09);
    CHECK(factory.unit == "Item(s)");
}

TEST_CASE("inventory shape errors carry the offending line") {
    auto expect_inventory_error = [](const std::string& text, const char* fragment) {
        CAPTURE(fragment);
        try {
            parse_inventory(text, "probe");
            FAIL_CHECK("expected inventory error");
        } catch (const Error& e) {
            CHECK(e.code() == "inventory");
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };

    expect_inventory_error("", "functional-unit header");
    expect_inventory_error("name,amount\nx,1\n", "functional-unit header");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,4\n",
                           "functional-unit header");  // too short to hold a flow table
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg\n" + kFlowHeader,
                           "functional-unit row needs 4 fields");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,zero,kg,4\n" + kFlowHeader,
                           "line 2: fu_amount");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,0,kg,4\n" + kFlowHeader,
                           "fu_amount must be a positive number");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,many\n" + kFlowHeader,
                           "parts_per_fu must be a whole number");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,4\nbad,header\nx,1\n",
                           "expected flow header");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,4\n" + kFlowHeader +
                               "steel,1.0,kg\n",
                           "line 4");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,4\n" + kFlowHeader +
                               "steel,heavy,kg,input\n",
                           "line 4");
    expect_inventory_error(std::string(kInventoryHeader) + "Widget,1,kg,4\n" + kFlowHeader +
                               "steel,1.0,kg,sideways\n",
                           "line 4");

    // an empty flow table is legal; zero parts_per_fu means "not stated"
    const Inventory empty = parse_inventory(
        std::string(kInventoryHeader) + "Widget,1,kg,0\n" + kFlowHeader, "probe");
    CHECK(empty.flows.empty());
    CHECK(empty.fu.parts_per_fu == 0);
}

TEST_CASE("batch flows rescale to the functional unit") {
    const std::vector<Flow> batch = {
        {"steel", 10.0, "kg", FlowDirection::Input},
        {"scrap", -0.4, "kg", FlowDirection::Output},
    };
    const FunctionalUnit fu{"Widget", 1.0, "kg", 5};

    const Inventory scaled = scale_inventory(batch, 4.0, "kg", fu);
    REQUIRE(scaled.flows.size() == 2);
    CHECK(scaled.flows[0].amount == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(scaled.flows[1].amount == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(scaled.fu.name == "Widget");

    try {
        scale_inventory(batch, 4.0, "t", fu);
        FAIL_CHECK("expected unit-mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "unit-mismatch");
    }
    CHECK_THROWS_AS(scale_inventory(batch, 0.0, "kg", fu), Error);
    CHECK_THROWS_AS(scale_inventory(batch, -1.0, "kg", fu), Error);
}

TEST_CASE("characterization matrices parse and validate") {
    const CharacterizationMatrix m = load_matrix(testutil::fixture("lca/desk_matrix.csv"));
    REQUIRE(m.factors.size() == 5);
    CHECK(m.category_units.at("Global warming") == "kg CO2 eq");
    CHECK(m.category_units.at("Fossil resource scarcity") == "kg oil eq");
    CHECK(m.category_units.at("Mineral resource scarcity") == "kg Cu eq");
    CHECK(m.category_units.at("Stratospheric ozone depletion") == "kg CFC11 eq");
    CHECK(m.category_units.at("Water consumption") == "m3");
    for (const auto& [category, flows] : m.factors) CHECK(flows.size() == 25);
    CHECK(m.characterizes("electricity, medium voltage"));
    CHECK(m.characterizes("isopropanol"));
    CHECK(!m.characterizes("unobtanium"));

    auto expect_matrix_error = [](const std::string& text, const char* fragment) {
        CAPTURE(fragment);
        try {
            parse_matrix(text, "probe");
            FAIL_CHECK("expected matrix error");
        } catch (const Error& e) {
            CHECK(e.code() == "matrix");
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_matrix_error("", "expected header");
    expect_matrix_error("cat,unit,flow\n", "expected header");
    expect_matrix_error(std::string(kMatrixHeader) + "GW,kg,steel\n", "4 fields");
    expect_matrix_error(std::string(kMatrixHeader) + "GW,kg,steel,much\n", "factor");
    expect_matrix_error(std::string(kMatrixHeader) + "GW,kg,steel,1\nGW,kg,steel,2\n",
                        "duplicate factor");
    expect_matrix_error(std::string(kMatrixHeader) + "GW,kg,steel,1\nGW,t,copper,2\n",
                        "switches unit");
}

TEST_CASE("the desk matrix reproduces the frozen category totals") {
    const Inventory inv = load_inventory(testutil::fixture("lca/pcb_inventory.csv"));
    const CharacterizationMatrix m = load_matrix(testutil::fixture("lca/desk_matrix.csv"));

    const ImpactScores scores = assess(inv, m, MissingFlowPolicy::Error);
    CHECK(scores.uncharacterized.empty());
    REQUIRE(scores.by_category.size() == 5);

    const struct {
        const char* category;
        double value;
        const char* unit;
    } expected[] = {
        {"Fossil resource scarcity", 3.86768514020769, "kg oil eq"},
        {"Global warming", 5.60866554068103, "kg CO2 eq"},
        {"Mineral resource scarcity", 0.14017046202198796, "kg Cu eq"},
        {"Stratospheric ozone depletion", 2.0172220200369147e-06, "kg CFC11 eq"},
        {"Water consumption", 0.05932697700236325, "m3"},
    };
    for (const auto& row : expected) {
        CAPTURE(row.category);
        const CategoryScore& s = scores.by_category.at(row.category);
        CHECK(std::abs(s.value - row.value) <= 1e-9);
        CHECK(s.unit == row.unit);
    }

    // the same assessment twice is bit-identical
    const ImpactScores again = assess(inv, m, MissingFlowPolicy::Error);
    for (const auto& [category, score] : scores.by_category)
        CHECK(again.by_category.at(category).value == score.value);
}

TEST_CASE("assessments match a brute-force restatement") {
    testutil::Rng rng(777001);
    for (int trial = 0; trial < 100; ++trial) {
        const Inventory inv = random_inventory(rng);
        const CharacterizationMatrix m = random_matrix(rng, true);
        const ImpactScores scores = assess(inv, m, MissingFlowPolicy::Error);
        const std::map<std::string, double> expected = oracle_scores(inv, m);
        REQUIRE(scores.by_category.size() == expected.size());
        for (const auto& [category, value] : expected) {
            CAPTURE(category);
            CHECK(std::abs(scores.by_category.at(category).value - value) <=
                  1e-9 * std::max(1.0, std::abs(value)));
        }
    }
}

TEST_CASE("assessments are linear and additive in the inventory") {
    testutil::Rng rng(777002);
    for (int trial = 0; trial < 200; ++trial) {
        const Inventory a = random_inventory(rng);
        const Inventory b = random_inventory(rng);
        const CharacterizationMatrix m = random_matrix(rng, trial % 2 == 0);

        const ImpactScores sa = assess(a, m, MissingFlowPolicy::WarnZero);
        const ImpactScores sb = assess(b, m, MissingFlowPolicy::WarnZero);

        // linearity: scaling every amount scales every score
        const double k = 0.125 + rng.unit() * 7.875;
        Inventory scaled = a;
        for (Flow& f : scaled.flows) f.amount *= k;
        const ImpactScores sk = assess(scaled, m, MissingFlowPolicy::WarnZero);
        for (const auto& [category, score] : sa.by_category) {
            const double want = k * score.value;
            CHECK(std::abs(sk.by_category.at(category).value - want) <=
                  1e-12 * std::max(1.0, std::abs(want)));
        }

        // additivity: concatenated inventories score as the sum of the parts
        Inventory joined = a;
        joined.flows.insert(joined.flows.end(), b.flows.begin(), b.flows.end());
        const ImpactScores sj = assess(joined, m, MissingFlowPolicy::WarnZero);
        for (const auto& [category, score] : sa.by_category) {
            const double want = score.value + sb.by_category.at(category).value;
            CHECK(std::abs(sj.by_category.at(category).value - want) <=
                  1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("uncharacterized flows follow the chosen policy") {
    Inventory inv = tiny_inventory();
    inv.flows.push_back({"mystery b", 1.0, "kg", FlowDirection::Input});
    inv.flows.push_back({"mystery a", 1.0, "kg", FlowDirection::Input});
    inv.flows.push_back({"mystery a", 2.0, "kg", FlowDirection::Output});

    const CharacterizationMatrix m = parse_matrix(
        std::string(kMatrixHeader) +
            "GW,kg CO2 eq,steel,0.5\n"
            "GW,kg CO2 eq,electricity,0.25\n"
            "GW,kg CO2 eq,scrap,1.0\n"
            "Empty cat,pts,unused flow,1.0\n",
        "probe");

    try {
        assess(inv, m, MissingFlowPolicy::Error);
        FAIL_CHECK("expected uncharacterized-flow");
    } catch (const Error& e) {
        CHECK(e.code() == "uncharacterized-flow");
        CHECK(std::string(e.what()).find("'mystery a', 'mystery b'") != std::string::npos);
    }

    const ImpactScores scores = assess(inv, m, MissingFlowPolicy::WarnZero);
    CHECK(scores.uncharacterized == std::vector<std::string>{"mystery a", "mystery b"});
    CHECK(scores.by_category.at("GW").value ==
          doctest::Approx(2.0 * 0.5 + 1.6 * 0.25 + (-0.1) * 1.0).epsilon(1e-12));
    // a category with no matching flows still appears, at zero
    CHECK(scores.by_category.at("Empty cat").value == 0.0);
    CHECK(scores.by_category.at("Empty cat").unit == "pts");
}

TEST_CASE("the electricity cross-check picks the foreground measurement") {
    const Inventory inv = load_inventory(testutil::fixture("lca/pcb_inventory.csv"));

    const CrossCheck c = energy_cross_check(inv, 0.47, inv.fu.parts_per_fu);
    CHECK(c.flow_name == "electricity, medium voltage");
    CHECK(c.fu_electricity_kwh == 2.338);  // the later, metered row wins
    CHECK(c.parts_per_fu == 5);
    CHECK(c.inventory_kwh_per_part == doctest::Approx(0.4676).epsilon(1e-12));
    CHECK(c.kpi_kwh_per_part == 0.47);
    CHECK(std::abs(c.relative_deviation - 0.005106382978723315) <= 1e-15);

    // matching is case-insensitive on the name, strict on unit and direction
    Inventory hand = tiny_inventory();
    hand.flows.push_back({"Electricity, RER grid", 3.0, "kWh", FlowDirection::Input});
    hand.flows.push_back({"electricity, exported", 9.0, "kWh", FlowDirection::Output});
    hand.flows.push_back({"electricity, site meter", 2.0, "MJ", FlowDirection::Input});
    const CrossCheck picked = energy_cross_check(hand, 0.5, 4);
    CHECK(picked.flow_name == "Electricity, RER grid");

    auto expect_code = [&](double kpi, int parts, const Inventory& which, const char* code) {
        CAPTURE(code);
        try {
            energy_cross_check(which, kpi, parts);
            FAIL_CHECK("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == code);
        }
    };
    expect_code(0.0, 5, inv, "bad-kpi-value");
    expect_code(-1.0, 5, inv, "bad-kpi-value");
    expect_code(0.47, 0, inv, "bad-parts-per-fu");
    Inventory no_elec = tiny_inventory();
    no_elec.flows[1].unit = "MJ";  // electricity row loses its kWh unit
    expect_code(0.47, 4, no_elec, "no-electricity-flow");
}
