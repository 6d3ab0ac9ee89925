#pragma once

#include <initializer_list>
#include <vector>

#include "pinball/billiard.hpp"

namespace pinball {

/// Finite sequence of bounce signs (w_1, w_2, ...), w_1 applied first.
struct ItineraryWord {
    std::vector<BounceSign> signs;

    ItineraryWord() = default;
    explicit ItineraryWord(std::vector<BounceSign> s) : signs(std::move(s)) {}
    /// Builds a word from +1/-1 integers; throws DomainError otherwise.
    static ItineraryWord from_ints(std::initializer_list<int> zs);
    static ItineraryWord from_ints(const std::vector<int>& zs);

    std::size_t size() const { return signs.size(); }
    bool empty() const { return signs.empty(); }
    BounceSign operator[](std::size_t k) const { return signs[k]; }
    /// Sum of the signs, i.e. the net side displacement of the word.
    int displacement() const;
    std::vector<int> ints() const;

    friend bool operator==(const ItineraryWord&, const ItineraryWord&) = default;
};

} // namespace pinball
