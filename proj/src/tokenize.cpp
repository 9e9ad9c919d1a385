#include "litcmp/tokenize.hpp"

namespace litcmp {

namespace {

bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_word(unsigned char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c >= 0x80; }

}  // namespace

std::vector<std::string> tokenize_label(std::string_view label) {
    std::vector<std::string> tokens;
    std::string current;
    unsigned char prev = 0;
    for (char ch : label) {
        auto c = static_cast<unsigned char>(ch);
        if (!is_word(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
            prev = 0;
            continue;
        }
        if (is_upper(c) && is_lower(prev) && !current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
        current += is_upper(c) ? static_cast<char>(c - 'A' + 'a') : ch;
        prev = c;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace litcmp
