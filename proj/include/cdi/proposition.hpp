#ifndef CDI_PROPOSITION_HPP
#define CDI_PROPOSITION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdi {

enum class Category { fact, belief, hypothesis, detail };

std::string_view to_string(Category c);

// Heading used when a proposition carries none, e.g. "Hypotheses".
std::string_view default_heading(Category c);

/// Maps a section heading onto a category.
///
/// Matching is case-insensitive on keywords: "hypothes" -> hypothesis,
/// "detail" -> detail, "belief" without "fact" -> belief. Everything else,
/// including "Facts/beliefs", "Background facts ..." and free-form headings
/// such as "Linux: rows 1, 8", is treated as observed fact.
Category category_from_heading(std::string_view heading);

struct Proposition {
    std::string id;
    std::string text;
    Category category = Category::fact;
    // Section heading as written in the source file; empty means the
    // category's default heading.
    std::string heading;

    bool operator==(const Proposition&) const = default;
};

// Throws ParseError if ids are invalid or repeated, or text is blank.
void validate_propositions(const std::vector<Proposition>& props);

/// Reads the "# Heading" / "- pN: text" layout. Blank lines separate
/// nothing and are ignored; any other line is an error.
std::vector<Proposition> parse_propositions(std::string_view text);

/// Inverse of parse_propositions: consecutive propositions sharing a
/// heading form one section, sections separated by a blank line.
std::string format_propositions(const std::vector<Proposition>& props);

std::vector<Proposition> load_propositions(const std::string& path);

} // namespace cdi

#endif // CDI_PROPOSITION_HPP
