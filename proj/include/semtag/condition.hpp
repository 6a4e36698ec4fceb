#pragma once

#include <array>
#include <string_view>

namespace semtag {

/// Tagging condition of an annotation session.
///
/// LT: comma-separated labels typed by the user, no suggestions.
/// ST: suggestions sampled from tags entered before.
/// SMT: suggestions from the annotation text and the geographic region.
/// SMT_CTX: as SMT, with concept abstracts exposed to the client.
enum class Condition { LT, ST, SMT, SMT_CTX };

inline constexpr std::array<Condition, 4> kAllConditions{Condition::LT, Condition::ST, Condition::SMT,
                                                         Condition::SMT_CTX};

std::string_view to_string(Condition c);
/// Accepts `SMT_CTX`, `SMT-CTX` and `CTX` for the context condition.
Condition parse_condition(std::string_view s);

bool allows_manual_entry(Condition c);
bool exposes_abstracts(Condition c);

} // namespace semtag
