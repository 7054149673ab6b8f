#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncpopt {

/// A word over symmetric letters X_1..X_n, stored as a byte string of
/// 1-based letter indices. The empty word is the unit 1. Letters are
/// self-adjoint, so the involution just reverses the letter sequence.
class Word {
public:
    Word() = default;
    explicit Word(std::string letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> ls) {
        letters_.reserve(ls.size());
        for (int l : ls) letters_.push_back(check_letter(l));
    }

    static Word unit() { return Word(); }
    static Word letter(int i) { return Word(std::string(1, check_letter(i))); }

    int degree() const { return static_cast<int>(letters_.size()); }
    bool is_unit() const { return letters_.empty(); }

    int letter_at(int pos) const { return static_cast<unsigned char>(letters_[pos]); }

    /// Reverses the word (the involution on the free *-algebra).
    Word star() const {
        std::string rev(letters_.rbegin(), letters_.rend());
        return Word(std::move(rev));
    }

    Word operator*(const Word& rhs) const { return Word(letters_ + rhs.letters_); }

    bool is_palindrome() const { return letters_ == std::string(letters_.rbegin(), letters_.rend()); }

    /// Set of 1-based variable indices occurring in the word.
    std::set<int> support() const {
        std::set<int> s;
        for (char c : letters_) s.insert(static_cast<unsigned char>(c));
        return s;
    }

    int max_letter() const {
        int m = 0;
        for (char c : letters_) m = std::max(m, int(static_cast<unsigned char>(c)));
        return m;
    }

    Word prefix(int len) const { return Word(letters_.substr(0, len)); }
    Word suffix(int len) const { return Word(letters_.substr(letters_.size() - len)); }
    Word rotated(int k) const {  // left rotation by k
        if (letters_.empty()) return *this;
        k %= degree();
        return Word(letters_.substr(k) + letters_.substr(0, k));
    }

    const std::string& letters() const { return letters_; }

    /// Graded lexicographic order: degree first, then letter sequence.
    friend bool operator<(const Word& a, const Word& b) {
        if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
        return a.letters_ < b.letters_;
    }
    friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator>(const Word& a, const Word& b) { return b < a; }
    friend bool operator<=(const Word& a, const Word& b) { return !(b < a); }

    /// "1" or "x1*x2^2" style rendering, matching the input grammar.
    std::string str() const {
        if (letters_.empty()) return "1";
        std::string out;
        size_t i = 0;
        while (i < letters_.size()) {
            size_t j = i;
            while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
            if (!out.empty()) out += '*';
            out += 'x' + std::to_string(int(static_cast<unsigned char>(letters_[i])));
            if (j - i > 1) out += '^' + std::to_string(j - i);
            i = j;
        }
        return out;
    }

private:
    static char check_letter(int i) {
        if (i < 1 || i > 255) throw std::out_of_range("variable index out of range: " + std::to_string(i));
        return static_cast<char>(i);
    }

    std::string letters_;
};

/// Canonical representative of the trace-equivalence class of w: the
/// graded-lex least word among all cyclic rotations of w and of w*.
/// Words map to the same representative exactly when the tracial,
/// symmetric moment functional must assign them equal values.
inline Word cyclic_canonical(const Word& w) {
    if (w.is_unit()) return w;
    Word best = w;
    Word rev = w.star();
    for (int k = 0; k < w.degree(); ++k) {
        Word r = w.rotated(k);
        if (r < best) best = r;
        Word rs = rev.rotated(k);
        if (rs < best) best = rs;
    }
    return best;
}

/// The lex-least of {w, w*}; the canonical key for a symmetric (but not
/// necessarily tracial) linear functional.
inline Word star_canonical(const Word& w) {
    Word s = w.star();
    return s < w ? s : w;
}

struct WordHash {
    size_t operator()(const Word& w) const { return std::hash<std::string>()(w.letters()); }
};

}  // namespace ncpopt
