#pragma once

#include "generators.hpp"

namespace nl2gql::testing {

// Nested-loop evaluation of a shape case straight from its parameters,
// sharing no code with the parser or executor.
ResultTable oracle_execute(const PropertyGraph& graph, const ShapeCase& c);

} // namespace nl2gql::testing
