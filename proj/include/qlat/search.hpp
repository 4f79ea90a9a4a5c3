#pragma once

// Witness search for diagonal quadratic equations over F_p[x]:
//
//     a_1 w_1^2 + ... + a_n w_n^2 = t,   deg w_i <= bound.
//
// Levels (= the maximum entry degree) are scanned in increasing order, and
// within a level the search is meet-in-the-middle: every suffix tuple is
// tabulated by its partial sum, keeping only the lexicographically smallest
// suffix per value, then prefixes are streamed in lexicographic order. The
// first hit therefore yields the witness that is minimal under
// (max entry degree, then entrywise canonical order) — reports never depend
// on hashing or scheduling.
//
// The search is complete within its level: "not found" at level b means no
// witness with all entries of degree <= b exists. Work and memory budgets
// cap the tabulation; a budget stop is reported distinctly from exhaustion.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qlat/poly.hpp"

namespace qlat {

struct SearchBudget {
    std::uint64_t max_states = 50'000'000;  // enumerated tuples, both phases
    std::uint64_t max_table_entries = 4'000'000;
};

struct SearchOutcome {
    bool found = false;
    std::vector<Poly> witness;      // meaningful iff found
    bool budget_exhausted = false;  // true: search stopped early, no verdict
    int levels_completed = -1;      // highest level fully covered
    std::uint64_t states = 0;       // tuples enumerated
};

namespace detail {

struct PolyKeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& c) const {
        std::size_t h = 1469598103934665603ULL;
        for (std::uint64_t v : c) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Odometer over index tuples with running partial sums: partial[i] is the
// contribution of coordinates [0, i), so advancing coordinate j only
// recomputes sums from j onward. Coordinate 0 is most significant, making
// the enumeration lexicographic in the witness tuple.
class SumCursor {
public:
    // terms[i][j] = contribution of choosing universe element j at slot i.
    SumCursor(const std::vector<std::vector<Poly>>& terms, std::uint64_t p)
        : terms_(terms), idx_(terms.size(), 0), partial_(terms.size() + 1, Poly::zero(p)) {
        for (std::size_t i = 0; i < terms_.size(); ++i)
            partial_[i + 1] = partial_[i] + terms_[i][0];
    }

    const Poly& sum() const { return partial_.back(); }
    const std::vector<std::uint32_t>& indices() const { return idx_; }

    bool all_zero_choice() const {
        for (std::uint32_t i : idx_)
            if (i != 0) return false;
        return true;
    }

    bool advance() {
        std::size_t j = idx_.size();
        while (j-- > 0) {
            if (idx_[j] + 1 < terms_[j].size()) {
                ++idx_[j];
                for (std::size_t i = j; i < idx_.size(); ++i)
                    partial_[i + 1] = partial_[i] + terms_[i][idx_[i]];
                return true;
            }
            idx_[j] = 0;
        }
        return false;
    }

private:
    const std::vector<std::vector<Poly>>& terms_;
    std::vector<std::uint32_t> idx_;
    std::vector<Poly> partial_;
};

}  // namespace detail

class DiagonalSearcher {
public:
    explicit DiagonalSearcher(std::vector<Poly> diag, SearchBudget budget = {})
        : diag_(std::move(diag)), budget_(budget) {
        if (diag_.empty()) throw std::invalid_argument("empty diagonal");
        p_ = diag_.front().characteristic();
        for (const Poly& a : diag_)
            if (a.is_zero() || a.characteristic() != p_)
                throw std::invalid_argument("diagonal entries must be nonzero over one field");
    }

    // Solve sum a_i w_i^2 = target with deg w_i <= degree_bound. When
    // require_nonzero is set (isotropy with target 0), the zero tuple is
    // rejected.
    SearchOutcome represent(const Poly& target, int degree_bound, bool require_nonzero = false) {
        SearchOutcome out;
        if (degree_bound < 0) return out;
        for (int level = 0; level <= degree_bound; ++level) {
            std::optional<std::vector<Poly>> w = run_level(target, level, require_nonzero, out);
            if (out.budget_exhausted) return out;
            out.levels_completed = level;
            if (w) {
                out.found = true;
                out.witness = std::move(*w);
                return out;
            }
        }
        return out;
    }

    SearchOutcome isotropic_vector(int degree_bound) {
        return represent(Poly::zero(p_), degree_bound, true);
    }

private:
    struct LevelTable {
        std::unordered_map<std::vector<std::uint64_t>, std::vector<std::uint32_t>, detail::PolyKeyHash>
            by_value;  // partial sum -> lex-min suffix index tuple
        std::optional<std::vector<std::uint32_t>> nonzero_suffix_for_zero;
        std::uint64_t build_states = 0;
    };

    // diag_[i] * f^2 for every f in the level's universe, canonical order.
    std::vector<std::vector<Poly>> term_lists(std::size_t first, std::size_t count,
                                              const std::vector<Poly>& universe) const {
        std::vector<std::vector<Poly>> terms(count);
        for (std::size_t i = 0; i < count; ++i) {
            terms[i].reserve(universe.size());
            for (const Poly& f : universe) terms[i].push_back(diag_[first + i] * f * f);
        }
        return terms;
    }

    const LevelTable* suffix_table(int level, std::size_t prefix_len, std::size_t suffix_len,
                                   const std::vector<Poly>& universe, SearchOutcome& out) {
        auto cached = tables_.find(level);
        if (cached != tables_.end()) return &cached->second;
        LevelTable t;
        std::vector<std::vector<Poly>> terms = term_lists(prefix_len, suffix_len, universe);
        detail::SumCursor cur(terms, p_);
        do {
            if (out.states + ++t.build_states > budget_.max_states) {
                out.states += t.build_states;
                out.budget_exhausted = true;
                return nullptr;
            }
            const Poly& s = cur.sum();
            auto it = t.by_value.find(s.coeffs());
            if (it == t.by_value.end()) {
                if (t.by_value.size() >= budget_.max_table_entries) {
                    out.states += t.build_states;
                    out.budget_exhausted = true;
                    return nullptr;
                }
                t.by_value.emplace(s.coeffs(), cur.indices());
            }
            if (s.is_zero() && !cur.all_zero_choice() && !t.nonzero_suffix_for_zero)
                t.nonzero_suffix_for_zero = cur.indices();
        } while (cur.advance());
        out.states += t.build_states;
        return &tables_.emplace(level, std::move(t)).first->second;
    }

    std::optional<std::vector<Poly>> run_level(const Poly& target, int level, bool require_nonzero,
                                               SearchOutcome& out) {
        std::size_t n = diag_.size();
        std::size_t suffix_len = n / 2;
        std::size_t prefix_len = n - suffix_len;
        std::vector<Poly> universe = polys_up_to_degree(p_, level);

        const LevelTable* table = nullptr;
        if (suffix_len > 0) {
            table = suffix_table(level, prefix_len, suffix_len, universe, out);
            if (!table) return std::nullopt;  // budget
        }

        std::vector<std::vector<Poly>> terms = term_lists(0, prefix_len, universe);
        detail::SumCursor cur(terms, p_);
        do {
            if (++out.states > budget_.max_states) {
                out.budget_exhausted = true;
                return std::nullopt;
            }
            Poly residual = target - cur.sum();
            const std::vector<std::uint32_t>* suffix = nullptr;
            static const std::vector<std::uint32_t> kEmpty;
            if (suffix_len == 0) {
                if (residual.is_zero() && !(require_nonzero && cur.all_zero_choice()))
                    suffix = &kEmpty;
            } else if (require_nonzero && cur.all_zero_choice() && residual.is_zero()) {
                if (table->nonzero_suffix_for_zero) suffix = &*table->nonzero_suffix_for_zero;
            } else {
                auto it = table->by_value.find(residual.coeffs());
                if (it != table->by_value.end()) suffix = &it->second;
            }
            if (suffix) {
                std::vector<Poly> w;
                w.reserve(n);
                for (std::uint32_t i : cur.indices()) w.push_back(universe[i]);
                for (std::uint32_t i : *suffix) w.push_back(universe[i]);
                return w;
            }
        } while (cur.advance());
        return std::nullopt;
    }

    std::vector<Poly> diag_;
    SearchBudget budget_;
    std::uint64_t p_;
    std::map<int, LevelTable> tables_;  // reused across targets
};

// One-shot helpers.
inline SearchOutcome search_diagonal_representation(const std::vector<Poly>& diag, const Poly& target,
                                                    int degree_bound, SearchBudget budget = {}) {
    return DiagonalSearcher(diag, budget).represent(target, degree_bound);
}

inline SearchOutcome search_diagonal_isotropy(const std::vector<Poly>& diag, int degree_bound,
                                              SearchBudget budget = {}) {
    return DiagonalSearcher(diag, budget).isotropic_vector(degree_bound);
}

}  // namespace qlat
