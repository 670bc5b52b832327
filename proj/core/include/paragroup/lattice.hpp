#pragma once

#include <cstddef>
#include <vector>

namespace paragroup {

/// Point of the non-negative integer lattice; coordinates are direction
/// multiplicities.
using LatticePoint = std::vector<int>;

int point_norm(const LatticePoint& n);  // |n| = sum of coordinates
LatticePoint add_unit(const LatticePoint& n, int direction);

/// Monotone lattice path: a start point and a sequence of direction indices.
struct LatticePath {
    LatticePoint start;
    std::vector<int> word;

    int length() const { return static_cast<int>(word.size()); }
    LatticePoint end() const;
};

/// Direction word of the canonical path to n: all 0-steps, then all 1-steps, ...
std::vector<int> canonical_word(const LatticePoint& n);

/// Permutations in one-line notation: sigma[k] is the image of k.
using Permutation = std::vector<int>;

int permutation_length(const Permutation& sigma);  // inversion count
Permutation compose(const Permutation& a, const Permutation& b);  // (a o b)(x) = a(b(x))

/// The permutation sigma with direction word (sigma(0), ..., sigma(s-1)).
/// Throws when the word has repeated letters.
Permutation path_permutation(const LatticePath& l);

/// Word in adjacent transpositions: positions p_1..p_l with
/// sigma = s_{p_1} o ... o s_{p_l}; reduced means l = inversion count.
struct ReducedWord {
    std::vector<int> letters;
    Permutation target;

    int length() const { return static_cast<int>(letters.size()); }
};

Permutation evaluate_word(const std::vector<int>& letters, int s);

/// All reduced words of sigma, deterministic order.
std::vector<ReducedWord> enumerate_reduced_words(const Permutation& sigma);

/// One minimal sequence of adjacent swaps of distinct letters turning
/// word(l) into word(lp). Equal letters keep their relative order.
std::vector<int> sorting_moves(const LatticePath& l, const LatticePath& lp);

/// Every minimal swap sequence from `from` to `to`; throws when more than
/// `cap` sequences exist.
std::vector<std::vector<int>> enumerate_minimal_move_sequences(const std::vector<int>& from,
                                                               const std::vector<int>& to,
                                                               std::size_t cap = 4096);

/// Word rewriting move: commutation s_i s_j = s_j s_i (|i-j| >= 2) or braid
/// s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1}, applied at `pos`.
struct WordMove {
    bool braid;
    int pos;
};

/// Words reachable from `letters` by one move, with the move that produced
/// them. Deterministic order.
std::vector<std::pair<WordMove, std::vector<int>>> word_neighbors(
    const std::vector<int>& letters);

/// A move sequence connecting two reduced words of the same permutation
/// (breadth-first, so of minimal move count).
std::vector<WordMove> connect_words(const ReducedWord& w, const ReducedWord& wp);

}  // namespace paragroup
