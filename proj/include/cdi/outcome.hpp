#ifndef CDI_OUTCOME_HPP
#define CDI_OUTCOME_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "cdi/graph.hpp"

namespace cdi {

using Rational = boost::rational<std::int64_t>;

struct Axis {
    std::string name;
    std::array<std::string, 2> values;
};

struct Assertion {
    std::size_t axis = 0;
    std::size_t value = 0;
};

/// Binary outcome axes plus the (axis, value) each hypothesis asserts.
/// Cells are numbered row-major with the first axis most significant.
class OutcomeSpace {
public:
    OutcomeSpace() = default;
    // Throws ParseError on unknown axes/values or two hypotheses asserting
    // the same axis value.
    OutcomeSpace(std::vector<Axis> axes, std::map<std::string, Assertion, LabelLess> assertions);

    const std::vector<Axis>& axes() const { return axes_; }
    const std::map<std::string, Assertion, LabelLess>& assertions() const { return assertions_; }

    std::size_t cell_count() const { return std::size_t{1} << axes_.size(); }
    // Value index of `axis` in `cell`.
    std::size_t value_of(std::size_t cell, std::size_t axis) const {
        return (cell >> (axes_.size() - 1 - axis)) & 1;
    }

    bool operator==(const OutcomeSpace&) const = default;

private:
    std::vector<Axis> axes_;
    std::map<std::string, Assertion, LabelLess> assertions_;
};

OutcomeSpace parse_outcome_space(std::string_view text);

// Counting-measure table with exact cell probabilities.
struct ExactTable {
    std::vector<Rational> cells;

    bool operator==(const ExactTable&) const = default;
};

struct JointTable {
    std::vector<double> cells;
};

JointTable to_real(const ExactTable& table);

/// Uniform distribution over the cells not ruled out by any rejected
/// hypothesis. Throws DomainError for labels without an assertion and for
/// rejections that rule out every cell.
ExactTable table_from_rejection(const LabelSet& rejected, const OutcomeSpace& space);

/// Cellwise weighted average. Weights must be nonnegative and sum to 1
/// within 1e-9 (the real version renormalizes inside that tolerance; the
/// exact version requires an exact sum of 1).
JointTable mixture(std::span<const JointTable> tables, std::span<const double> weights);
ExactTable mixture(std::span<const ExactTable> tables, std::span<const Rational> weights);

// One row per cell: axis values, probability, and (exact tables) the
// rational.
std::string table_csv(const OutcomeSpace& space, const JointTable& table);
std::string table_csv(const OutcomeSpace& space, const ExactTable& table);

// Two-axis spaces print as a grid; others as a cell list. 3 decimals.
std::string format_table(const OutcomeSpace& space, const JointTable& table);

} // namespace cdi

#endif // CDI_OUTCOME_HPP
