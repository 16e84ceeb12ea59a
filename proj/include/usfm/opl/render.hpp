#pragma once

#include <string>

#include "usfm/opm/model.hpp"

namespace usfm::opl {

// Canonical text form. Deterministic: declarations sorted by name, links in
// declaration order, one sentence per line. render -> parse -> render is a
// fixpoint, and parsing the rendering of a parsed document reproduces an
// isomorphic model.
std::string render_opl(const opm::Model& m);

// Graphviz rendering: objects as boxes, processes as ellipses, physical
// things filled, environmental things dashed, states as rounded sub-nodes
// clustered with their owner. An empty model is a valid empty digraph.
std::string export_dot(const opm::Model& m);

}  // namespace usfm::opl
