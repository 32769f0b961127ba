#include <doctest.h>

#include "cdi/error.hpp"
#include "cdi/io.hpp"
#include "cdi/outcome.hpp"
#include "support.hpp"

using namespace cdi;

namespace {

OutcomeSpace wifi_space() { return parse_outcome_space(read_file(testsupport::fixture("wifi_outcomes.json"))); }

// Cells in row-major order: (Fix=no, Complain=no), (no, yes), (yes, no), (yes, yes).
std::vector<Rational> cells(std::initializer_list<Rational> xs) { return xs; }

}  // namespace

TEST_CASE("outcome space parsing") {
    const auto space = wifi_space();
    CHECK(space.axes().size() == 2);
    CHECK(space.cell_count() == 4);
    CHECK(space.value_of(2, 0) == 1);
    CHECK(space.value_of(2, 1) == 0);
    CHECK_THROWS_AS(parse_outcome_space(R"({"axes":[{"name":"A","values":["x","x"]}]})"), ParseError);
    CHECK_THROWS_AS(parse_outcome_space(R"({"axes":[{"name":"A","values":["x","y"]}],
        "assertions":{"p1":{"axis":"A","value":"x"},"p2":{"axis":"A","value":"x"}}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_outcome_space(R"({"axes":[{"name":"A","values":["x","y"]}],
        "assertions":{"p1":{"axis":"B","value":"x"}}})"),
                    ParseError);
}

TEST_CASE("per-cut tables") {
    const auto space = wifi_space();
    const Rational q(1, 4);
    const Rational h(1, 2);
    CHECK(table_from_rejection({}, space).cells == cells({q, q, q, q}));
    CHECK(table_from_rejection({"p16"}, space).cells == cells({0, 0, h, h}));
    CHECK(table_from_rejection({"p16", "p17"}, space).cells == cells({0, 0, 1, 0}));
    CHECK(table_from_rejection({"p15", "p18"}, space).cells == cells({0, 1, 0, 0}));
    CHECK_THROWS_AS(table_from_rejection({"p15", "p16"}, space), DomainError);
    CHECK_THROWS_AS(table_from_rejection({"p3"}, space), DomainError);
}

TEST_CASE("uniform mixture over the three optimal cuts") {
    const auto space = wifi_space();
    std::vector<ExactTable> tables{table_from_rejection({}, space), table_from_rejection({"p16"}, space),
                                   table_from_rejection({"p16", "p17"}, space)};
    const Rational third(1, 3);
    std::vector<Rational> w{third, third, third};
    const auto mix = mixture(tables, w);
    CHECK(mix.cells == cells({Rational(1, 12), Rational(1, 12), Rational(7, 12), Rational(1, 4)}));

    const auto text = format_table(space, to_real(mix));
    CHECK(text.find("0.083") != std::string::npos);
    CHECK(text.find("0.583") != std::string::npos);
    CHECK(text.find("0.250") != std::string::npos);

    const auto csv = table_csv(space, mix);
    CHECK(csv.find("yes,no,0.58333") != std::string::npos);
    CHECK(csv.find("7/12") != std::string::npos);
}

TEST_CASE("mixture identities") {
    const auto space = wifi_space();
    const auto a = table_from_rejection({"p16"}, space);
    const auto b = table_from_rejection({"p18"}, space);
    // A single component is returned unchanged.
    std::vector<ExactTable> one{a};
    std::vector<Rational> unit{Rational(1)};
    CHECK(mixture(one, unit) == a);
    // Mixing a table with itself is idempotent.
    std::vector<ExactTable> same{a, a};
    std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
    CHECK(mixture(same, halves) == a);
    // Cells of a mixture sum to one.
    std::vector<ExactTable> two{a, b};
    std::vector<Rational> w{Rational(1, 3), Rational(2, 3)};
    Rational total(0);
    for (const auto& c : mixture(two, w).cells) {
        total += c;
    }
    CHECK(total == Rational(1));

    std::vector<Rational> bad{Rational(1, 3), Rational(1, 3)};
    CHECK_THROWS_AS(mixture(two, bad), DomainError);
    std::vector<Rational> negative{Rational(3, 2), Rational(-1, 2)};
    CHECK_THROWS_AS(mixture(two, negative), DomainError);

    // The real version tolerates rounding in the weights.
    std::vector<JointTable> reals{to_real(a), to_real(b)};
    std::vector<double> rw{1.0 / 3.0, 2.0 / 3.0};
    const auto mix = mixture(reals, rw);
    CHECK(mix.cells[0] + mix.cells[1] + mix.cells[2] + mix.cells[3] == doctest::Approx(1.0));
    std::vector<double> off{0.5, 0.6};
    CHECK_THROWS_AS(mixture(reals, off), DomainError);
}
