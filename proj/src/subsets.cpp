#include "bml/subsets.hpp"

#include <set>

namespace bml {

ExampleSet ExampleSet::restriction(std::vector<Literal> lits) {
    std::set<int> pos, neg;
    for (const auto& l : lits) (l.negated ? neg : pos).insert(l.var);
    for (int v : pos)
        if (neg.count(v)) throw input_error("contradictory literal restriction");
    // drop duplicates, keep deterministic order
    std::sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) {
        return a.var != b.var ? a.var < b.var : a.negated < b.negated;
    });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    ExampleSet s;
    s.v_ = CubeRestriction{std::move(lits)};
    return s;
}

std::uint64_t ExampleSet::size(const Domain& d) const {
    if (auto* pts = std::get_if<std::vector<std::uint64_t>>(&v_)) return pts->size();
    if (auto* r = std::get_if<GridRange>(&v_)) {
        if (d.kind != Domain::Kind::unit_grid)
            throw input_error("grid range over non-grid domain");
        // points (i+1)/n with ceil(lo*n) <= i+1 <= floor(hi*n), clamped to [1, n]
        std::int64_t lo = (r->lo * Rational(d.n)).ceil();
        std::int64_t hi = (r->hi * Rational(d.n)).floor();
        lo = std::max<std::int64_t>(lo, 1);
        hi = std::min<std::int64_t>(hi, d.n);
        return hi >= lo ? (std::uint64_t)(hi - lo + 1) : 0;
    }
    const auto& c = std::get<CubeRestriction>(v_);
    if (full_) return d.size();
    if (d.kind != Domain::Kind::boolean_cube)
        throw input_error("literal restriction over non-cube domain");
    return d.size() >> c.literals.size();
}

bool ExampleSet::contains(const Domain& d, std::uint64_t x) const {
    if (full_) return true;
    if (auto* pts = std::get_if<std::vector<std::uint64_t>>(&v_))
        return std::binary_search(pts->begin(), pts->end(), x);
    if (auto* r = std::get_if<GridRange>(&v_)) {
        Rational v = d.point_value(x);
        return r->lo <= v && v <= r->hi;
    }
    const auto& c = std::get<CubeRestriction>(v_);
    for (const auto& lit : c.literals)
        if (!d.satisfies(x, lit)) return false;
    return true;
}

std::vector<std::uint64_t> ExampleSet::expand(const Domain& d) const {
    if (auto* pts = std::get_if<std::vector<std::uint64_t>>(&v_)) return *pts;
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < d.size(); ++x)
        if (contains(d, x)) out.push_back(x);
    return out;
}

std::string ExampleSet::str(const Domain&) const {
    if (full_) return "X";
    if (auto* r = std::get_if<GridRange>(&v_))
        return "[" + r->lo.str() + ", " + r->hi.str() + "]";
    if (auto* c = std::get_if<CubeRestriction>(&v_)) {
        std::string s = "{";
        for (std::size_t i = 0; i < c->literals.size(); ++i)
            s += (i ? "," : "") + c->literals[i].str();
        return s + "}";
    }
    const auto& pts = std::get<std::vector<std::uint64_t>>(v_);
    std::string s = "{";
    for (std::size_t i = 0; i < pts.size(); ++i)
        s += (i ? "," : "") + std::to_string(pts[i]);
    return s + "}";
}

std::uint64_t HypothesisSet::size() const {
    if (auto* idx = std::get_if<std::vector<std::uint64_t>>(&v_)) return idx->size();
    if (auto* r = std::get_if<IndexRange>(&v_))
        return r->hi >= r->lo ? r->hi - r->lo + 1 : 0;
    throw input_error("symbolic hypothesis set has no free-standing size");
}

bool HypothesisSet::contains(std::uint64_t h) const {
    if (auto* idx = std::get_if<std::vector<std::uint64_t>>(&v_))
        return std::binary_search(idx->begin(), idx->end(), h);
    if (auto* r = std::get_if<IndexRange>(&v_)) return h >= r->lo && h <= r->hi;
    throw input_error("symbolic hypothesis set has no membership test");
}

std::vector<std::uint64_t> HypothesisSet::expand() const {
    if (auto* idx = std::get_if<std::vector<std::uint64_t>>(&v_)) return *idx;
    if (auto* r = std::get_if<IndexRange>(&v_)) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t h = r->lo; r->hi >= r->lo && h <= r->hi; ++h)
            out.push_back(h);
        return out;
    }
    throw input_error("symbolic hypothesis set cannot expand");
}

std::string HypothesisSet::str() const {
    if (auto* s = std::get_if<Symbolic>(&v_)) return "<" + s->text + ">";
    if (auto* r = std::get_if<IndexRange>(&v_))
        return "h[" + std::to_string(r->lo) + ".." + std::to_string(r->hi) + "]";
    const auto& idx = std::get<std::vector<std::uint64_t>>(v_);
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i)
        s += (i ? "," : "") + std::to_string(idx[i]);
    return s + "}";
}

} // namespace bml
