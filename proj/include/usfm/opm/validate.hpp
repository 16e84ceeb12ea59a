#pragma once

#include <string>
#include <vector>

#include "usfm/opm/model.hpp"

namespace usfm::opm {

// Rule identifiers reported by validate_graph. The add_* mutators enforce the
// same rules eagerly; validate_graph re-checks a model that arrived by other
// means (deserialization, hand-assembly, mutation testing).
namespace violation {
inline constexpr const char* UnresolvedThing = "UNRESOLVED_THING";
inline constexpr const char* UnresolvedState = "UNRESOLVED_STATE";
inline constexpr const char* BadId = "BAD_ID";
inline constexpr const char* EmptyName = "EMPTY_NAME";
inline constexpr const char* DupName = "DUP_NAME";
inline constexpr const char* DupState = "DUP_STATE";
inline constexpr const char* StateOnProcess = "STATE_ON_PROCESS";
inline constexpr const char* StateOwner = "STATE_OWNER";
inline constexpr const char* IllegalEndpoint = "ILLEGAL_ENDPOINT";
inline constexpr const char* QualifierForbidden = "QUALIFIER_FORBIDDEN";
inline constexpr const char* MissingState = "MISSING_STATE";
inline constexpr const char* SameState = "SAME_STATE";
}  // namespace violation

struct Violation {
    std::string rule;
    std::string subject;  // "thing" | "state" | "link"
    std::uint32_t index;  // id of the offending element
    std::string message;
};

// Full structural audit in deterministic order: things, then states, then
// links, each by ascending id with a fixed per-element rule order.
std::vector<Violation> validate_graph(const Model& m);

// Extracts the refinement view of `zoomed`: its in-zoom children, everything
// reachable from them through structural links, their states, and every link
// whose two ends both lie in the view. Ids are reassigned densely in the
// original declaration order. Returns nullopt when the thing has no in-zoom
// children.
std::optional<Model> in_zoom_view(const Model& m, ThingId zoomed);

}  // namespace usfm::opm
