#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace litcmp {

// Splits a property label into lowercase tokens. Boundaries are whitespace,
// ASCII punctuation and lower->upper camelCase transitions, so
// "ex:disambiguationTask" yields {"ex", "disambiguation", "task"}.
// Non-ASCII bytes are kept inside tokens unchanged.
std::vector<std::string> tokenize_label(std::string_view label);

}  // namespace litcmp
