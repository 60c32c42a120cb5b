#pragma once

#include <string>
#include <string_view>

namespace longkey::corpus {

// Porter suffix-stripping stemmer (the original published algorithm, no
// later departures). Operates on lowercase ASCII words; words of length <= 2
// or containing characters outside [a-z] are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace longkey::corpus
