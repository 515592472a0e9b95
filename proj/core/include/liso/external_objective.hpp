#pragma once

#include "liso/objectives.hpp"

#include <string>
#include <string_view>

namespace liso {

/// Objective backed by a child process speaking a line protocol on its
/// standard streams.
///
/// Request: the d coordinates as shortest round-trip decimals separated by
/// single spaces, then '\n', written to the child's stdin.
/// Response: one decimal number on one line of the child's stdout.
///
/// `command` is run through /bin/sh -c. The child lives as long as the
/// returned Objective (or any copy of its evaluator). Spawn failure, a closed
/// pipe, an unparsable or non-finite response all raise EvaluationError with
/// the raw response attached. Not safe for concurrent evaluation; use one
/// objective (one child) per thread.
Objective make_external_objective(std::string command, int dimension,
                                  std::optional<Vector> known_minimizer = std::nullopt);

std::string format_request(std::span<const double> x);

/// Parses one response line (trailing "\r\n" and surrounding blanks allowed).
double parse_response(std::string_view line);

}  // namespace liso
