#include "paragroup/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace paragroup {

int point_norm(const LatticePoint& n) {
    int s = 0;
    for (int c : n) {
        if (c < 0) throw std::invalid_argument("lattice point with negative coordinate");
        s += c;
    }
    return s;
}

LatticePoint add_unit(const LatticePoint& n, int direction) {
    if (direction < 0) throw std::invalid_argument("negative direction");
    LatticePoint m = n;
    if (direction >= static_cast<int>(m.size())) m.resize(direction + 1, 0);
    m[direction] += 1;
    return m;
}

LatticePoint LatticePath::end() const {
    LatticePoint e = start;
    for (int d : word) e = add_unit(e, d);
    return e;
}

std::vector<int> canonical_word(const LatticePoint& n) {
    std::vector<int> w;
    for (size_t d = 0; d < n.size(); ++d) {
        if (n[d] < 0) throw std::invalid_argument("lattice point with negative coordinate");
        w.insert(w.end(), n[d], static_cast<int>(d));
    }
    return w;
}

int permutation_length(const Permutation& sigma) {
    int inv = 0;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j]) ++inv;
    return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
    Permutation c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

Permutation path_permutation(const LatticePath& l) {
    int s = l.length();
    std::vector<bool> seen(s, false);
    for (int d : l.word) {
        if (d < 0 || d >= s || seen[d])
            throw std::invalid_argument(
                "path_permutation: direction word is not a permutation of 0..s-1");
        seen[d] = true;
    }
    return l.word;
}

Permutation evaluate_word(const std::vector<int>& letters, int s) {
    Permutation sigma(s);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int p : letters) {
        if (p < 0 || p + 1 >= s) throw std::invalid_argument("word letter out of range");
        std::swap(sigma[p], sigma[p + 1]);  // right multiplication by s_p
    }
    return sigma;
}

namespace {

void reduced_words_rec(Permutation sigma, std::vector<int>& acc,
                       std::vector<ReducedWord>& out, const Permutation& target) {
    bool descent = false;
    for (size_t p = 0; p + 1 < sigma.size(); ++p) {
        if (sigma[p] > sigma[p + 1]) {
            descent = true;
            std::swap(sigma[p], sigma[p + 1]);  // sigma s_p, shorter
            acc.push_back(static_cast<int>(p));
            reduced_words_rec(sigma, acc, out, target);
            acc.pop_back();
            std::swap(sigma[p], sigma[p + 1]);
        }
    }
    if (!descent) {  // identity reached; letters were collected right-to-left
        ReducedWord w;
        w.letters.assign(acc.rbegin(), acc.rend());
        w.target = target;
        out.push_back(std::move(w));
    }
}

}  // namespace

std::vector<ReducedWord> enumerate_reduced_words(const Permutation& sigma) {
    std::vector<ReducedWord> out;
    std::vector<int> acc;
    reduced_words_rec(sigma, acc, out, sigma);
    std::sort(out.begin(), out.end(),
              [](const ReducedWord& a, const ReducedWord& b) { return a.letters < b.letters; });
    return out;
}

namespace {

/// Position permutation matching each occurrence of a letter in `from` to the
/// same-ranked occurrence in `to`.
Permutation stable_matching(const std::vector<int>& from, const std::vector<int>& to) {
    if (from.size() != to.size())
        throw std::invalid_argument("words have different lengths");
    std::map<int, std::vector<int>> slots;  // letter -> positions in `to`, in order
    for (size_t i = 0; i < to.size(); ++i) slots[to[i]].push_back(static_cast<int>(i));
    std::map<int, size_t> used;
    Permutation tau(from.size());
    for (size_t i = 0; i < from.size(); ++i) {
        auto it = slots.find(from[i]);
        if (it == slots.end() || used[from[i]] >= it->second.size())
            throw std::invalid_argument("words are not permutations of the same multiset");
        tau[i] = it->second[used[from[i]]++];
    }
    return tau;
}

}  // namespace

std::vector<int> sorting_moves(const LatticePath& l, const LatticePath& lp) {
    if (l.start != lp.start || l.end() != lp.end())
        throw std::invalid_argument("sorting_moves: paths have different endpoints");
    Permutation tau = stable_matching(l.word, lp.word);
    // bubble by target position; every crossing involves distinct letters
    std::vector<int> moves;
    std::vector<int> t = tau;
    for (size_t k = 0; k < t.size(); ++k) {
        size_t q = k;
        while (q < t.size() && t[q] != static_cast<int>(k)) ++q;
        for (size_t p = q; p > k; --p) {
            moves.push_back(static_cast<int>(p - 1));
            std::swap(t[p - 1], t[p]);
        }
    }
    return moves;
}

namespace {

void minimal_sequences_rec(std::vector<int>& word, Permutation& tau, std::vector<int>& acc,
                           std::vector<std::vector<int>>& out, std::size_t cap) {
    bool any = false;
    for (size_t p = 0; p + 1 < tau.size(); ++p) {
        if (tau[p] > tau[p + 1]) {
            if (word[p] == word[p + 1])
                throw std::logic_error("minimal sequence would swap equal letters");
            any = true;
            std::swap(tau[p], tau[p + 1]);
            std::swap(word[p], word[p + 1]);
            acc.push_back(static_cast<int>(p));
            minimal_sequences_rec(word, tau, acc, out, cap);
            acc.pop_back();
            std::swap(tau[p], tau[p + 1]);
            std::swap(word[p], word[p + 1]);
        }
    }
    if (!any) {
        out.push_back(acc);
        if (out.size() > cap)
            throw std::runtime_error("enumerate_minimal_move_sequences: cap exceeded");
    }
}

}  // namespace

std::vector<std::vector<int>> enumerate_minimal_move_sequences(const std::vector<int>& from,
                                                               const std::vector<int>& to,
                                                               std::size_t cap) {
    // tau[i] = target position of from[i]; `to` is reached when tau sorts to
    // the identity, and a swap at p is on a minimal route iff tau[p] > tau[p+1].
    Permutation tau = stable_matching(from, to);
    std::vector<int> word = from;
    std::vector<std::vector<int>> out;
    std::vector<int> acc;
    minimal_sequences_rec(word, tau, acc, out, cap);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<WordMove, std::vector<int>>> word_neighbors(
    const std::vector<int>& letters) {
    std::vector<std::pair<WordMove, std::vector<int>>> out;
    for (size_t p = 0; p + 1 < letters.size(); ++p) {
        if (std::abs(letters[p] - letters[p + 1]) >= 2) {
            auto w = letters;
            std::swap(w[p], w[p + 1]);
            out.push_back({WordMove{false, static_cast<int>(p)}, std::move(w)});
        }
    }
    for (size_t p = 0; p + 2 < letters.size(); ++p) {
        if (letters[p] == letters[p + 2] && std::abs(letters[p] - letters[p + 1]) == 1) {
            auto w = letters;  // (a,b,a) -> (b,a,b)
            w[p] = letters[p + 1];
            w[p + 1] = letters[p];
            w[p + 2] = letters[p + 1];
            out.push_back({WordMove{true, static_cast<int>(p)}, std::move(w)});
        }
    }
    return out;
}

std::vector<WordMove> connect_words(const ReducedWord& w, const ReducedWord& wp) {
    if (w.target != wp.target)
        throw std::invalid_argument("connect_words: different target permutations");
    int s = static_cast<int>(w.target.size());
    int len = permutation_length(w.target);
    if (w.length() != len || wp.length() != len ||
        evaluate_word(w.letters, s) != w.target || evaluate_word(wp.letters, s) != wp.target)
        throw std::invalid_argument("connect_words: words are not reduced words of the target");

    if (w.letters == wp.letters) return {};
    std::map<std::vector<int>, std::pair<std::vector<int>, WordMove>> parent;
    std::queue<std::vector<int>> q;
    q.push(w.letters);
    parent[w.letters] = {w.letters, WordMove{false, -1}};
    while (!q.empty()) {
        auto cur = q.front();
        q.pop();
        for (auto& [mv, nxt] : word_neighbors(cur)) {
            if (parent.count(nxt)) continue;
            parent[nxt] = {cur, mv};
            if (nxt == wp.letters) {
                std::vector<WordMove> moves;
                std::vector<int> at = nxt;
                while (at != w.letters) {
                    moves.push_back(parent[at].second);
                    at = parent[at].first;
                }
                std::reverse(moves.begin(), moves.end());
                return moves;
            }
            q.push(nxt);
        }
    }
    throw std::runtime_error("connect_words: words not connected by braid/commutation moves");
}

}  // namespace paragroup
