#include "semtag/condition.hpp"
#include "semtag/error.hpp"

#include <string>

namespace semtag {

std::string_view to_string(Condition c) {
    switch (c) {
    case Condition::LT: return "LT";
    case Condition::ST: return "ST";
    case Condition::SMT: return "SMT";
    case Condition::SMT_CTX: return "SMT_CTX";
    }
    return "?";
}

Condition parse_condition(std::string_view s) {
    if (s == "LT") return Condition::LT;
    if (s == "ST") return Condition::ST;
    if (s == "SMT") return Condition::SMT;
    if (s == "SMT_CTX" || s == "SMT-CTX" || s == "CTX") return Condition::SMT_CTX;
    throw Error(ErrorCode::Validation, "unknown condition '" + std::string(s) + "'");
}

bool allows_manual_entry(Condition c) { return c == Condition::LT; }

bool exposes_abstracts(Condition c) { return c == Condition::SMT_CTX; }

} // namespace semtag
