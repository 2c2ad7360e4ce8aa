#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "subexp/ambiguity.hpp"

namespace subexp {

/**
 * Family interchange format:
 *
 *   { "support": [x_0, ..., x_{m-1}],
 *     "laws":    [[w_00, ..., w_0,m-1], ...] }
 *
 * Support strictly increasing; every law row has one nonnegative weight per
 * support point and sums to one. Parse errors and validation failures throw
 * std::invalid_argument with a message naming the offending law/point index.
 */
AmbiguitySet family_from_json(const std::string& text);
std::string family_to_json(const AmbiguitySet& fam, int indent = 2);

AmbiguitySet load_family(const std::filesystem::path& path);
void save_family(const AmbiguitySet& fam, const std::filesystem::path& path);

}  // namespace subexp
