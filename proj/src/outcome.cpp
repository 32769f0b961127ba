#include "cdi/outcome.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cdi/error.hpp"
#include "cdi/io.hpp"

namespace cdi {

OutcomeSpace::OutcomeSpace(std::vector<Axis> axes, std::map<std::string, Assertion, LabelLess> assertions)
    : axes_(std::move(axes)), assertions_(std::move(assertions)) {
    if (axes_.empty() || axes_.size() > 16) {
        throw ParseError("an outcome space needs between 1 and 16 axes");
    }
    std::set<std::string> names;
    for (const auto& a : axes_) {
        if (!names.insert(a.name).second) {
            throw ParseError("duplicate axis '" + a.name + "'");
        }
        if (a.values[0] == a.values[1]) {
            throw ParseError("axis '" + a.name + "' needs two distinct values");
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> taken;
    for (const auto& [label, as] : assertions_) {
        if (as.axis >= axes_.size() || as.value > 1) {
            throw ParseError("assertion for '" + label + "' is out of range");
        }
        if (!taken.emplace(as.axis, as.value).second) {
            const auto& ax = axes_[as.axis];
            throw ParseError("two hypotheses assert " + ax.name + " = " + ax.values[as.value]);
        }
    }
}

OutcomeSpace parse_outcome_space(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("outcome space is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("axes") || !doc["axes"].is_array()) {
        throw ParseError("outcome space needs an 'axes' array");
    }
    std::vector<Axis> axes;
    for (const auto& a : doc["axes"]) {
        if (!a.is_object() || !a.contains("name") || !a.contains("values") || !a["values"].is_array() ||
            a["values"].size() != 2) {
            throw ParseError("each axis needs a 'name' and exactly two 'values'");
        }
        axes.push_back({a["name"].get<std::string>(),
                        {a["values"][0].get<std::string>(), a["values"][1].get<std::string>()}});
    }
    std::map<std::string, Assertion, LabelLess> assertions;
    if (doc.contains("assertions")) {
        if (!doc["assertions"].is_object()) {
            throw ParseError("'assertions' must map hypothesis labels to {axis, value}");
        }
        for (const auto& [label, as] : doc["assertions"].items()) {
            if (!as.is_object() || !as.contains("axis") || !as.contains("value")) {
                throw ParseError("assertion for '" + label + "' needs 'axis' and 'value'");
            }
            const auto axis = as["axis"].get<std::string>();
            const auto value = as["value"].get<std::string>();
            Assertion out;
            bool found = false;
            for (std::size_t i = 0; i < axes.size() && !found; ++i) {
                if (axes[i].name != axis) {
                    continue;
                }
                for (std::size_t v = 0; v < 2; ++v) {
                    if (axes[i].values[v] == value) {
                        out = {i, v};
                        found = true;
                    }
                }
            }
            if (!found) {
                throw ParseError("assertion for '" + label + "' names unknown " + axis + " = " + value);
            }
            assertions.emplace(label, out);
        }
    }
    return OutcomeSpace(std::move(axes), std::move(assertions));
}

JointTable to_real(const ExactTable& table) {
    JointTable out;
    out.cells.reserve(table.cells.size());
    for (const auto& r : table.cells) {
        out.cells.push_back(boost::rational_cast<double>(r));
    }
    return out;
}

ExactTable table_from_rejection(const LabelSet& rejected, const OutcomeSpace& space) {
    std::vector<char> alive(space.cell_count(), 1);
    for (const auto& label : rejected) {
        auto it = space.assertions().find(label);
        if (it == space.assertions().end()) {
            throw DomainError("rejected label '" + label + "' asserts no outcome");
        }
        for (std::size_t cell = 0; cell < alive.size(); ++cell) {
            if (space.value_of(cell, it->second.axis) == it->second.value) {
                alive[cell] = 0;
            }
        }
    }
    const auto survivors = static_cast<std::int64_t>(std::count(alive.begin(), alive.end(), 1));
    if (survivors == 0) {
        throw DomainError("rejecting " + format_part(rejected) + " rules out every outcome");
    }
    ExactTable t;
    for (char a : alive) {
        t.cells.push_back(a ? Rational(1, survivors) : Rational(0));
    }
    return t;
}

JointTable mixture(std::span<const JointTable> tables, std::span<const double> weights) {
    if (tables.empty() || tables.size() != weights.size()) {
        throw DomainError("mixture needs one weight per table");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw DomainError("mixture weights must be nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("mixture weights sum to " + format_real(total) + ", not 1");
    }
    JointTable out;
    out.cells.assign(tables.front().cells.size(), 0.0);
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (tables[t].cells.size() != out.cells.size()) {
            throw DomainError("mixture tables have different cell structure");
        }
        for (std::size_t c = 0; c < out.cells.size(); ++c) {
            out.cells[c] += weights[t] / total * tables[t].cells[c];
        }
    }
    return out;
}

ExactTable mixture(std::span<const ExactTable> tables, std::span<const Rational> weights) {
    if (tables.empty() || tables.size() != weights.size()) {
        throw DomainError("mixture needs one weight per table");
    }
    Rational total(0);
    for (const auto& w : weights) {
        if (w < Rational(0)) {
            throw DomainError("mixture weights must be nonnegative");
        }
        total += w;
    }
    if (total != Rational(1)) {
        throw DomainError("exact mixture weights must sum to 1");
    }
    ExactTable out;
    out.cells.assign(tables.front().cells.size(), Rational(0));
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (tables[t].cells.size() != out.cells.size()) {
            throw DomainError("mixture tables have different cell structure");
        }
        for (std::size_t c = 0; c < out.cells.size(); ++c) {
            out.cells[c] += weights[t] * tables[t].cells[c];
        }
    }
    return out;
}

namespace {

void csv_header(std::ostringstream& out, const OutcomeSpace& space, bool exact) {
    for (const auto& a : space.axes()) {
        out << a.name << ',';
    }
    out << "probability" << (exact ? ",exact" : "") << '\n';
}

void csv_cell(std::ostringstream& out, const OutcomeSpace& space, std::size_t cell) {
    for (std::size_t a = 0; a < space.axes().size(); ++a) {
        out << space.axes()[a].values[space.value_of(cell, a)] << ',';
    }
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace

std::string table_csv(const OutcomeSpace& space, const JointTable& table) {
    std::ostringstream out;
    csv_header(out, space, false);
    for (std::size_t c = 0; c < table.cells.size(); ++c) {
        csv_cell(out, space, c);
        out << format_real(table.cells[c]) << '\n';
    }
    return out.str();
}

std::string table_csv(const OutcomeSpace& space, const ExactTable& table) {
    std::ostringstream out;
    csv_header(out, space, true);
    for (std::size_t c = 0; c < table.cells.size(); ++c) {
        csv_cell(out, space, c);
        const auto& r = table.cells[c];
        out << format_real(boost::rational_cast<double>(r)) << ',' << r.numerator() << '/' << r.denominator() << '\n';
    }
    return out.str();
}

std::string format_table(const OutcomeSpace& space, const JointTable& table) {
    std::ostringstream out;
    const auto& axes = space.axes();
    if (axes.size() == 2) {
        out << "| " << axes[0].name << " \\ " << axes[1].name << " | " << axes[1].values[0] << " | "
            << axes[1].values[1] << " |\n";
        out << "|---|---|---|\n";
        for (std::size_t r = 0; r < 2; ++r) {
            out << "| " << axes[0].values[r] << " | " << fixed3(table.cells[r * 2]) << " | "
                << fixed3(table.cells[r * 2 + 1]) << " |\n";
        }
        return out.str();
    }
    for (std::size_t c = 0; c < table.cells.size(); ++c) {
        out << "- ";
        for (std::size_t a = 0; a < axes.size(); ++a) {
            out << (a ? ", " : "") << axes[a].name << '=' << axes[a].values[space.value_of(c, a)];
        }
        out << ": " << fixed3(table.cells[c]) << '\n';
    }
    return out.str();
}

} // namespace cdi
