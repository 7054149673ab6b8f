#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ncpopt/csp.hpp"
#include "ncpopt/word.hpp"

namespace ncpopt {

/// sigma(n, d) = sum_{i=0}^d n^i, the number of words of degree <= d in n
/// letters (d+1 when n = 1).
inline long word_count(int n, int d) {
    if (n <= 1) return d + 1;
    long total = 0, p = 1;
    for (int i = 0; i <= d; ++i) {
        total += p;
        p *= n;
    }
    return total;
}

/// All words of degree <= order in the given variables, graded-lex sorted.
struct WordBasis {
    VarSet clique;
    int order = 0;
    std::vector<Word> words;

    WordBasis() = default;
    WordBasis(const VarSet& vars, int ord) : clique(vars), order(ord) {
        std::vector<int> letters(vars.begin(), vars.end());
        std::vector<Word> level{Word::unit()};
        words = level;
        for (int d = 1; d <= ord; ++d) {
            std::vector<Word> next;
            next.reserve(level.size() * letters.size());
            for (const auto& w : level)
                for (int l : letters) next.push_back(w * Word::letter(l));
            std::sort(next.begin(), next.end());
            words.insert(words.end(), next.begin(), next.end());
            level = std::move(next);
        }
    }

    size_t size() const { return words.size(); }
};

enum class MomentKeyMode { Eig, Trace };

/// Maps canonical word keys to scalar moment-variable ids. The eigenvalue
/// key identifies w with w* (L symmetric); the trace key identifies the
/// whole cyclic class of w and w* (L tracial and symmetric). The unit word
/// is pinned to the constant 1 and owns no variable. Words supported in a
/// clique overlap resolve to the same id from either side, which is what
/// couples the per-clique blocks.
class MomentVariableTable {
public:
    static constexpr int kUnit = -1;

    explicit MomentVariableTable(MomentKeyMode mode = MomentKeyMode::Eig) : mode_(mode) {}

    MomentKeyMode mode() const { return mode_; }

    Word key_of(const Word& w) const {
        return mode_ == MomentKeyMode::Eig ? star_canonical(w) : cyclic_canonical(w);
    }

    int get_or_insert(const Word& w) {
        Word key = key_of(w);
        if (key.is_unit()) return kUnit;
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(keys_.size());
        ids_.emplace(key, id);
        keys_.push_back(key);
        return id;
    }

    int lookup(const Word& w) const {
        Word key = key_of(w);
        if (key.is_unit()) return kUnit;
        auto it = ids_.find(key);
        return it == ids_.end() ? -2 : it->second;
    }

    const Word& key(int id) const { return keys_[id]; }
    int size() const { return static_cast<int>(keys_.size()); }
    const std::vector<Word>& keys() const { return keys_; }

private:
    MomentKeyMode mode_;
    std::unordered_map<Word, int, WordHash> ids_;
    std::vector<Word> keys_;
};

}  // namespace ncpopt
