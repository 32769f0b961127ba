#include "cdi/proposition.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "cdi/error.hpp"
#include "cdi/graph.hpp"
#include "cdi/io.hpp"

namespace cdi {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view heading_of(const Proposition& p) {
    return p.heading.empty() ? default_heading(p.category) : std::string_view(p.heading);
}

} // namespace

std::string_view to_string(Category c) {
    switch (c) {
    case Category::fact: return "fact";
    case Category::belief: return "belief";
    case Category::hypothesis: return "hypothesis";
    case Category::detail: return "detail";
    }
    return "fact";
}

std::string_view default_heading(Category c) {
    switch (c) {
    case Category::fact: return "Facts";
    case Category::belief: return "Beliefs";
    case Category::hypothesis: return "Hypotheses";
    case Category::detail: return "Details";
    }
    return "Facts";
}

Category category_from_heading(std::string_view heading) {
    const std::string h = lower(heading);
    if (h.find("hypothes") != std::string::npos) {
        return Category::hypothesis;
    }
    if (h.find("detail") != std::string::npos) {
        return Category::detail;
    }
    if (h.find("belief") != std::string::npos && h.find("fact") == std::string::npos) {
        return Category::belief;
    }
    return Category::fact;
}

void validate_propositions(const std::vector<Proposition>& props) {
    std::set<std::string> seen;
    for (const auto& p : props) {
        if (!is_valid_label(p.id)) {
            throw ParseError("invalid proposition id '" + p.id + "'");
        }
        if (!seen.insert(p.id).second) {
            throw ParseError("duplicate proposition id '" + p.id + "'");
        }
        if (trim(p.text).empty()) {
            throw ParseError("proposition '" + p.id + "' has empty text");
        }
    }
}

std::vector<Proposition> parse_propositions(std::string_view text) {
    std::vector<Proposition> props;
    std::optional<std::string> heading;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '#') {
            auto h = trim(line.substr(1));
            if (h.empty()) {
                throw ParseError(where + "empty section heading");
            }
            heading = std::string(h);
            continue;
        }
        if (line.front() != '-') {
            throw ParseError(where + "expected '# Heading' or '- label: text'");
        }
        if (!heading) {
            throw ParseError(where + "proposition before any '# Heading'");
        }
        auto body = trim(line.substr(1));
        auto colon = body.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(where + "missing ':' after proposition label");
        }
        Proposition p;
        p.id = std::string(trim(body.substr(0, colon)));
        p.text = std::string(trim(body.substr(colon + 1)));
        p.category = category_from_heading(*heading);
        p.heading = *heading;
        if (!is_valid_label(p.id)) {
            throw ParseError(where + "invalid label '" + p.id + "'");
        }
        props.push_back(std::move(p));
    }
    validate_propositions(props);
    return props;
}

std::string format_propositions(const std::vector<Proposition>& props) {
    std::string out;
    std::optional<std::string_view> current;
    for (const auto& p : props) {
        auto h = heading_of(p);
        if (!current || *current != h) {
            if (current) {
                out += "\n";
            }
            out += "# ";
            out += h;
            out += "\n";
            current = h;
        }
        out += "- " + p.id + ": " + p.text + "\n";
    }
    return out;
}

std::vector<Proposition> load_propositions(const std::string& path) {
    try {
        return parse_propositions(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace cdi
