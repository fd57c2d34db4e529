#include "bml/learners/decision_list_learner.hpp"

#include <cmath>

namespace bml {

DecisionListLearner::DecisionListLearner(int n, Rational eps,
                                         std::optional<std::uint64_t> fixed_k,
                                         Rational eta)
    : n_(n), eps_(std::move(eps)), eta_(std::move(eta)), fixed_k_(fixed_k) {
    if (n < 1 || n > 16) throw input_error("variable count out of range");
    if (!(eps_ < Rational(1)))
        throw input_error("eps must be below 1");
    if (!(eps_ > Rational(1, (std::int64_t)1 << n)))
        throw input_error("eps must exceed 2^-n");
    I_ = 1;
    while (Rational((std::int64_t)1 << I_) * eps_ < Rational(1)) ++I_;
    reset();
}

void DecisionListLearner::reset() {
    j_ = 0;
    i_ = 1;
    b_ = false;
    prefix_.clear();
    constraints_.clear();
    masks_.assign((std::size_t)I_ + 1, 0);
    done_ = false;
    result_ = DecisionList(n_, {}, false);
    action_.reset();
    est_.reset();
    close_.reset();
    init_level(1);
    advance();
}

void DecisionListLearner::init_level(int level) {
    std::uint64_t m = 0;
    for (int var = 0; var < n_; ++var) {
        bool constrained = false;
        for (const auto& c : constraints_)
            if (c.var == var) constrained = true;
        if (constrained) continue;
        for (int id = var * 4; id < var * 4 + 4; ++id) m |= (std::uint64_t)1 << id;
    }
    masks_[(std::size_t)level] = m;
    probe_cursor_ = 0;
}

std::vector<int> DecisionListLearner::run_candidates() const {
    std::vector<int> out;
    if (i_ <= j_ + 1) return out;
    for (int var = 0; var < n_; ++var)
        for (int neg = 0; neg < 2; ++neg) {
            int id = var * 4 + neg * 2 + (b_ ? 1 : 0);
            bool everywhere = true;
            for (int m = j_ + 1; m < i_; ++m)
                if (!(masks_[(std::size_t)m] >> id & 1)) everywhere = false;
            if (everywhere) out.push_back(id);
        }
    return out;
}

void DecisionListLearner::freeze_run(const std::vector<int>& candidates) {
    int s = slots();
    std::vector<int> chosen;
    std::vector<bool> used((std::size_t)n_, false);
    for (int id : candidates) {
        if ((int)chosen.size() == s) break;
        Literal lit = pair_literal(id);
        if (used[(std::size_t)lit.var]) continue;
        used[(std::size_t)lit.var] = true;
        chosen.push_back(id);
    }
    if ((int)chosen.size() < s)
        throw learner_failure("run candidates collide; cannot freeze the prefix");
    for (int id : chosen) {
        Literal lit = pair_literal(id);
        prefix_.push_back({lit, b_});
        constraints_.push_back(lit.complement());
    }
    j_ = i_ - 1;
    // pairs over freshly constrained variables leave the open level
    for (int id : chosen) {
        int var = pair_literal(id).var;
        for (int k = var * 4; k < var * 4 + 4; ++k)
            masks_[(std::size_t)i_] &= ~((std::uint64_t)1 << k);
    }
}

void DecisionListLearner::delete_pair(int level, int id) {
    masks_[(std::size_t)level] &= ~((std::uint64_t)1 << id);
    if (on_delete) on_delete(level, id);
}

void DecisionListLearner::delete_from_run(int id) {
    for (int m = j_ + 1; m < i_; ++m) {
        if (masks_[(std::size_t)m] >> id & 1) {
            masks_[(std::size_t)m] &= ~((std::uint64_t)1 << id);
            if (on_delete) on_delete(m, id);
        }
    }
}

std::optional<DecisionListLearner::Action> DecisionListLearner::find_action() {
    const std::uint64_t mi = masks_[(std::size_t)i_];
    std::vector<int> cand = run_candidates();
    auto in_run = [&](const Literal& lit) {
        int id = pair_id(lit, b_);
        for (int c : cand)
            if (c == id) return true;
        return false;
    };
    // same-level conflicts (complementary literals are the special case)
    for (int l0 = 0; l0 < 4 * n_; l0 += 2) {
        if (!(mi >> l0 & 1)) continue; // (lit, 0)
        for (int l1 = 1; l1 < 4 * n_; l1 += 2) {
            if (!(mi >> l1 & 1)) continue; // (lit', 1)
            Literal a = pair_literal(l0), b = pair_literal(l1);
            if (a.var == b.var && a.negated != b.negated) continue;
            if (i_ > j_ + 1 && in_run(b_ ? b : a)) continue;
            return Action{SameLevel{l0, l1}};
        }
    }
    // too many run candidates and opposite-bit pairs waiting at this level:
    // probe candidates one by one until only genuine run fillers remain
    if (i_ > j_ + 1 && (int)cand.size() > slots()) {
        bool opposite = false;
        int want = b_ ? 0 : 1;
        for (int lc = want; lc < 4 * n_; lc += 2)
            if (mi >> lc & 1) opposite = true;
        if (opposite)
            for (int lr : cand)
                if (lr >= probe_cursor_) return Action{RunProbe{lr}};
    }
    // complementary survivors
    for (int var = 0; var < n_; ++var)
        for (int pol = 0; pol < 2; ++pol) {
            int l0 = var * 4 + pol * 2;           // (lit, 0)
            int l1 = var * 4 + (1 - pol) * 2 + 1; // (not-lit, 1)
            if ((mi >> l0 & 1) && (mi >> l1 & 1))
                return Action{SpecialClose{l0, l1, build_hprime(pair_literal(l0))}};
        }
    return std::nullopt;
}

bool DecisionListLearner::advance() {
    while (!done_) {
        if (est_ || close_) return true;
        if (i_ > j_ + 1) {
            auto cand = run_candidates();
            if ((int)cand.size() == slots() && slots() > 0) {
                freeze_run(cand);
                continue;
            }
            if ((int)cand.size() < slots())
                throw learner_failure("run candidates exhausted");
        }
        auto act = find_action();
        if (!act) {
            if (masks_[(std::size_t)i_] == 0)
                throw learner_failure("level candidates exhausted");
            bool any_zero = false, any_run_bit = false;
            for (int id = 0; id < 4 * n_; ++id) {
                if (!(masks_[(std::size_t)i_] >> id & 1)) continue;
                if (!pair_bit(id)) any_zero = true;
                if (pair_bit(id) == b_) any_run_bit = true;
            }
            // an open run keeps its bit as long as same-bit pairs survive;
            // otherwise the zero side wins ties
            if (!(i_ > j_ + 1 && any_run_bit)) b_ = !any_zero;
            ++i_;
            if (i_ > I_) {
                result_ = assemble();
                done_ = true;
                return true;
            }
            init_level(i_);
            continue;
        }
        action_ = act;
        begin(*act);
    }
    return true;
}

ExampleSet DecisionListLearner::query_set(const std::vector<Literal>& extra) const {
    std::vector<Literal> lits = constraints_;
    lits.insert(lits.end(), extra.begin(), extra.end());
    return ExampleSet::restriction(std::move(lits));
}

Rational DecisionListLearner::delta_per_call() const {
    return Rational(1, 10) / Rational(8 * (std::int64_t)n_ * I_);
}

std::uint64_t DecisionListLearner::size_k(const Rational& weight) const {
    if (fixed_k_) return *fixed_k_;
    double delta = delta_per_call().to_double();
    double tau = eps_.to_double() / 2;
    double k1 = std::log(4.0 / delta) / weight.to_double();
    double k2 = std::log(4.0 / delta) / (2 * tau * tau);
    return (std::uint64_t)std::ceil(std::max(k1, k2));
}

std::uint64_t DecisionListLearner::close_k() const {
    if (fixed_k_) return *fixed_k_;
    double delta = delta_per_call().to_double();
    double e = eps_.to_double();
    return (std::uint64_t)std::ceil(std::log(2.0 / delta) / (2 * e * e));
}

void DecisionListLearner::begin(const Action& a) {
    Domain dom = Domain::cube(n_);
    auto start_estimate = [&](const std::vector<Literal>& extra) {
        PendingEstimate pe;
        pe.S = query_set(extra);
        Rational weight((std::int64_t)pe.S.size(dom), (std::int64_t)dom.size());
        pe.k = size_k(weight);
        pe.cap = (std::uint64_t)(Rational(2 * (std::int64_t)pe.k) / weight).ceil();
        est_ = std::move(pe);
    };
    if (auto* s = std::get_if<SameLevel>(&a)) {
        start_estimate({pair_literal(s->l0), pair_literal(s->l1)});
    } else if (auto* p = std::get_if<RunProbe>(&a)) {
        start_estimate({pair_literal(p->lrun)});
    } else if (auto* sc = std::get_if<SpecialClose>(&a)) {
        close_ = PendingClose{sc->hprime, close_k(), 0, 0};
    } else if (auto* sa = std::get_if<SpecialEstA>(&a)) {
        int opp = beff() == 0 ? sa->l1 : sa->l0;
        start_estimate({pair_literal(opp)});
    } else if (auto* sb = std::get_if<SpecialEstB>(&a)) {
        int same = beff() == 0 ? sb->l0 : sb->l1;
        start_estimate({pair_literal(same)});
    }
}

Rational DecisionListLearner::debias(const Rational& raw) const {
    if (eta_.num() == 0) return raw;
    Rational d = (raw - eta_) / (Rational(1) - Rational(2) * eta_);
    if (d < Rational(0)) return Rational(0);
    if (d > Rational(1)) return Rational(1);
    return d;
}

void DecisionListLearner::decide(const Rational& est) {
    Action act = *action_;
    action_.reset();
    const Rational b_r(beff());
    if (auto* s = std::get_if<SameLevel>(&act)) {
        bool near_run_bit = (est - b_r).abs() < eps_;
        int doomed = near_run_bit ? (beff() == 0 ? s->l1 : s->l0)
                                  : (beff() == 0 ? s->l0 : s->l1);
        delete_pair(i_, doomed);
    } else if (auto* p = std::get_if<RunProbe>(&act)) {
        // a literal still viable for a run slot forces the target to the run
        // bit on its whole restriction; anything else rules it out
        Rational run_r(b_ ? 1 : 0);
        bool viable = exact_ ? est == run_r : (est - run_r).abs() < eps_ / Rational(2);
        if (viable)
            probe_cursor_ = p->lrun + 1;
        else
            delete_from_run(p->lrun);
    } else if (auto* sa = std::get_if<SpecialEstA>(&act)) {
        // opposite-side pair at this level forces its restriction to the
        // run-fires value exactly; anything else rules the rewrite form out
        int m = slots();
        Rational reach(1, (std::int64_t)1 << m);
        Rational expected = beff() == 0 ? reach : Rational(1) - reach;
        bool viable = exact_ ? est == expected
                             : (est - expected).abs() <= eps_ / Rational(2);
        if (!viable) {
            delete_pair(i_, beff() == 0 ? sa->l1 : sa->l0);
        } else {
            action_ = Action{SpecialEstB{sa->l0, sa->l1}};
            begin(*action_);
        }
    } else if (auto* sb = std::get_if<SpecialEstB>(&act)) {
        // the run-bit side stays viable iff the target is constant at the
        // run bit on its whole restriction; then the rewrite is redundant
        bool both = exact_ ? est == b_r : (est - b_r).abs() < eps_ / Rational(2);
        delete_pair(i_, both ? (beff() == 0 ? sb->l1 : sb->l0)
                             : (beff() == 0 ? sb->l0 : sb->l1));
    }
}

void DecisionListLearner::decide_close(bool accepted) {
    Action act = *action_;
    action_.reset();
    auto* sc = std::get_if<SpecialClose>(&act);
    if (accepted) {
        done_ = true;
        result_ = sc->hprime;
        return;
    }
    action_ = Action{SpecialEstA{sc->l0, sc->l1}};
    begin(*action_);
}

bool DecisionListLearner::step(const LabeledExample& ex) {
    if (done_) return true;
    Domain dom = Domain::cube(n_);
    if (close_) {
        if (close_->h.eval(dom, ex.x) != ex.y) ++close_->disagree;
        if (++close_->seen >= close_->k) {
            Rational rate((std::int64_t)close_->disagree, (std::int64_t)close_->k);
            Rational threshold =
                eta_ + (Rational(1) - Rational(2) * eta_) * Rational(2) * eps_;
            close_.reset();
            decide_close(rate <= threshold);
            if (!done_ && !est_ && !close_) advance();
        }
        return done_;
    }
    PendingEstimate& pe = *est_;
    ++pe.drawn;
    if (pe.S.contains(dom, ex.x)) {
        ++pe.in_s;
        if (ex.y) ++pe.positive;
    }
    if (pe.in_s >= pe.k || pe.drawn >= pe.cap) {
        if (pe.in_s == 0)
            throw estimation_failure("no example satisfied the query constraints");
        Rational raw((std::int64_t)pe.positive, (std::int64_t)pe.in_s);
        est_.reset();
        decide(debias(raw));
        if (!done_ && !est_ && !close_) advance();
    }
    return done_;
}

DecisionList DecisionListLearner::run_exact(SQOracle& oracle) {
    reset();
    exact_ = &oracle;
    Domain dom = Domain::cube(n_);
    while (!done_) {
        if (close_) {
            DecisionList h = close_->h;
            close_.reset();
            decide_close(is_close_sq(
                oracle, [&](std::uint64_t x) { return h.eval(dom, x); }, eps_));
            continue;
        }
        if (est_) {
            ExampleSet S = est_->S;
            est_.reset();
            decide(estimate_sq(oracle, S, eps_ / Rational(2)));
            continue;
        }
        advance();
    }
    exact_ = nullptr;
    return result_;
}

DecisionList DecisionListLearner::assemble() const {
    std::vector<DecisionList::Level> levels = prefix_;
    std::vector<bool> used((std::size_t)n_, false);
    for (const auto& lv : prefix_) used[(std::size_t)lv.lit.var] = true;
    for (int m = j_ + 1; m <= I_; ++m) {
        // prefer run-bit survivors; guarded leftovers of the other bit are
        // the junk the open run never had to resolve
        int picked = -1;
        for (int id = 0; id < 4 * n_ && picked < 0; ++id)
            if ((masks_[(std::size_t)m] >> id & 1) && pair_bit(id) == b_ &&
                !used[(std::size_t)pair_literal(id).var])
                picked = id;
        for (int id = 0; id < 4 * n_ && picked < 0; ++id)
            if ((masks_[(std::size_t)m] >> id & 1) &&
                !used[(std::size_t)pair_literal(id).var])
                picked = id;
        if (picked < 0) continue;
        used[(std::size_t)pair_literal(picked).var] = true;
        levels.push_back({pair_literal(picked), pair_bit(picked)});
    }
    return DecisionList(n_, std::move(levels), b_);
}

DecisionList DecisionListLearner::build_hprime(const Literal& zero_side) const {
    std::vector<DecisionList::Level> levels = prefix_;
    std::vector<bool> used((std::size_t)n_, false);
    for (const auto& lv : prefix_) used[(std::size_t)lv.lit.var] = true;
    levels.push_back({zero_side.complement(), true});
    used[(std::size_t)zero_side.var] = true;
    for (int var = 0; var < n_; ++var)
        if (!used[(std::size_t)var]) levels.push_back({Literal{var, false}, false});
    return DecisionList(n_, std::move(levels), false);
}

BitString DecisionListLearner::encode_state() const {
    BitWriter w;
    w.put_bit(done_);
    unsigned lw = bits_for((std::uint64_t)I_ + 1);
    w.put((std::uint64_t)j_, lw);
    w.put((std::uint64_t)i_, lw);
    w.put_bit(b_);
    // constraints: two bits per variable (free / forced true / forced false)
    for (int var = 0; var < n_; ++var) {
        int code = 0;
        for (const auto& c : constraints_)
            if (c.var == var) code = c.negated ? 2 : 1;
        w.put((std::uint64_t)code, 2);
    }
    for (const auto& lv : prefix_) {
        w.put((std::uint64_t)(lv.lit.var * 2 + lv.lit.negated), bits_for(2u * n_));
        w.put_bit(lv.out);
    }
    for (int m = j_ + 1; m <= std::min(i_, I_); ++m)
        w.put(masks_[(std::size_t)m], (unsigned)(4 * n_));
    w.put((std::uint64_t)probe_cursor_, bits_for(4u * n_));
    if (close_) {
        w.put(0, 3);
        unsigned kw = bits_for(close_->k);
        w.put(close_->seen, kw);
        w.put(close_->disagree, kw);
    } else if (est_) {
        std::uint64_t tag = 1;
        if (action_ && std::holds_alternative<SpecialEstA>(*action_)) tag = 2;
        if (action_ && std::holds_alternative<SpecialEstB>(*action_)) tag = 3;
        w.put(tag, 3);
        unsigned kw = bits_for(est_->k);
        unsigned cw = bits_for(est_->cap);
        w.put(est_->drawn, cw);
        w.put(est_->in_s, kw);
        w.put(est_->positive, kw);
    } else {
        w.put(4, 3);
    }
    return w.take();
}

void DecisionListLearner::decode_state(const BitString& bs) {
    BitReader r(bs);
    done_ = r.get_bit();
    unsigned lw = bits_for((std::uint64_t)I_ + 1);
    j_ = (int)r.get(lw);
    i_ = (int)r.get(lw);
    b_ = r.get_bit();
    constraints_.clear();
    for (int var = 0; var < n_; ++var) {
        std::uint64_t code = r.get(2);
        if (code == 1) constraints_.push_back({var, false});
        if (code == 2) constraints_.push_back({var, true});
    }
    prefix_.clear();
    for (int t = 0; t < j_; ++t) {
        std::uint64_t lit = r.get(bits_for(2u * n_));
        bool out = r.get_bit();
        prefix_.push_back({Literal{(int)(lit / 2), (lit & 1) != 0}, out});
    }
    masks_.assign((std::size_t)I_ + 1, 0);
    for (int m = j_ + 1; m <= std::min(i_, I_); ++m)
        masks_[(std::size_t)m] = r.get((unsigned)(4 * n_));
    probe_cursor_ = (int)r.get(bits_for(4u * n_));
    action_.reset();
    est_.reset();
    close_.reset();
    std::uint64_t tag = r.get(3);
    if (done_ || tag == 4) {
        if (done_) result_ = assemble();
        return;
    }
    // the pending action is a deterministic function of the decoded sets
    auto act = find_action();
    if (!act) throw input_error("state tag disagrees with the pair sets");
    if (tag == 2 || tag == 3) {
        auto* sc = std::get_if<SpecialClose>(&*act);
        if (!sc) throw input_error("state tag disagrees with the pair sets");
        if (tag == 2)
            act = Action{SpecialEstA{sc->l0, sc->l1}};
        else
            act = Action{SpecialEstB{sc->l0, sc->l1}};
    }
    action_ = act;
    begin(*act);
    if (tag == 0) {
        if (!close_) throw input_error("state tag disagrees with the pair sets");
        unsigned kw = bits_for(close_->k);
        close_->seen = r.get(kw);
        close_->disagree = r.get(kw);
    } else {
        if (!est_) throw input_error("state tag disagrees with the pair sets");
        unsigned kw = bits_for(est_->k);
        unsigned cw = bits_for(est_->cap);
        est_->drawn = r.get(cw);
        est_->in_s = r.get(kw);
        est_->positive = r.get(kw);
    }
}

std::uint64_t DecisionListLearner::semantic_bits() const {
    // the model state reserves a pair set per level plus the constraint
    // trits, the indices and the live subroutine counters
    std::uint64_t bits = 4u * (std::uint64_t)n_ * (std::uint64_t)I_ +
                         2u * (std::uint64_t)n_ +
                         2 * bits_for((std::uint64_t)I_ + 1) + 1 +
                         bits_for(4u * n_);
    if (close_) bits += 2 * bits_for(close_->k);
    if (est_) bits += 2 * bits_for(est_->k) + bits_for(est_->cap);
    return bits;
}

OracleResponse DecisionListLearner::oracle_view() const {
    if (done_) return OracleResponse::make_tight(0, result_.text());
    if (close_) return OracleResponse::make_tight(0, close_->h.text());
    if (!est_ || !action_)
        return OracleResponse::make_tight(0, assemble().text());
    auto describe = [&](int id) {
        return pair_literal(id).str() + std::string("->") +
               (pair_bit(id) ? "1" : "0");
    };
    std::string zero_side, one_side;
    if (auto* s = std::get_if<SameLevel>(&*action_)) {
        zero_side = describe(s->l0);
        one_side = describe(s->l1);
    } else if (auto* p = std::get_if<RunProbe>(&*action_)) {
        zero_side = "run-fillers " + describe(p->lrun);
        one_side = "level" + std::to_string(i_) + " opposite-bit pairs";
    } else if (auto* sa = std::get_if<SpecialEstA>(&*action_)) {
        zero_side = describe(sa->l0);
        one_side = describe(sa->l1);
    } else if (auto* sb = std::get_if<SpecialEstB>(&*action_)) {
        zero_side = describe(sb->l0);
        one_side = describe(sb->l1);
    }
    SeparationWitness w;
    w.S = est_->S;
    w.T0 = HypothesisSet::symbolic("dl-level" + std::to_string(i_) + " " + zero_side);
    w.T1 = HypothesisSet::symbolic("dl-level" + std::to_string(i_) + " " + one_side);
    Rational s_size((std::int64_t)est_->S.size(Domain::cube(n_)));
    if (beff() == 0) {
        w.d0 = Rational(0);
        w.d1 = Rational(2) * eps_ * s_size;
    } else {
        w.d0 = (Rational(1) - Rational(2) * eps_) * s_size;
        w.d1 = s_size;
    }
    return OracleResponse::make_separated(std::move(w));
}

OracleResponse decision_list_oracle(DecisionListLearner& learner, const Rational&) {
    return learner.oracle_view();
}

} // namespace bml
