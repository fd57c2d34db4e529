#pragma once

#include <optional>

#include "bml/hypothesis_class.hpp"
#include "bml/rational.hpp"

namespace bml {

// Family description files: UTF-8 text, one `key = value` pair per line,
// '#' comments.  Keys: kind (threshold | equal-piece | decision-list),
// n, p (exact rational "num/den", equal-piece only), seed-class (salt for
// random target draws).
struct ClassFile {
    std::string kind;
    int n = 0;
    std::optional<Rational> p;
    std::optional<std::uint64_t> seed_class;

    ClassPtr build() const;
    static ClassFile parse_file(const std::string& path);
    static ClassFile parse_text(const std::string& text);
};

} // namespace bml
