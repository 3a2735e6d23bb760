#pragma once

#include <iosfwd>
#include <string>

#include "msqp/problem.hpp"

namespace msqp {

/// Dense copy of a binary-labelled sparse dataset.
struct LabeledData {
  Matrix X;       ///< N×n features, zeros where an index was absent.
  Vector labels;  ///< ±1.
};

/**
 * Parses SVM-light/LIBSVM text: `<label> <index>:<value> ...` per line with
 * 1-based, strictly ascending indices. Blank lines and `#` comments are
 * skipped. Two distinct raw labels are mapped smaller → −1, larger → +1; a
 * file with a single raw label maps it by sign. The feature count is the
 * largest index seen, or min_features if that is larger.
 *
 * Throws ParseError (with line number) on malformed input, and for an empty
 * stream or more than two distinct labels.
 */
LabeledData parse_libsvm(std::istream& in, int min_features = 0);

LabeledData load_libsvm(const std::string& path, int min_features = 0);

/// Writes the nonzero entries of each row in the same format.
void write_libsvm(std::ostream& out, const LabeledData& data);

}  // namespace msqp
