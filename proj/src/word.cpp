#include "pinball/word.hpp"

namespace pinball {

ItineraryWord ItineraryWord::from_ints(std::initializer_list<int> zs) {
    return from_ints(std::vector<int>(zs));
}

ItineraryWord ItineraryWord::from_ints(const std::vector<int>& zs) {
    ItineraryWord w;
    w.signs.reserve(zs.size());
    for (int z : zs) {
        w.signs.push_back(to_sign(z));
    }
    return w;
}

int ItineraryWord::displacement() const {
    int sum = 0;
    for (BounceSign z : signs) sum += value(z);
    return sum;
}

std::vector<int> ItineraryWord::ints() const {
    std::vector<int> out;
    out.reserve(signs.size());
    for (BounceSign z : signs) out.push_back(value(z));
    return out;
}

} // namespace pinball
