#pragma once

#include <string>
#include <utility>

#include "zmest/hmm.hpp"

namespace zmest {

// Model files are JSON documents:
//   { "alphabet": ["0","1"], "pi": [...], "P": [[...],...], "R": [[...],...] }
// Numbers are parsed as 64-bit floats. Parse and shape problems throw
// std::runtime_error (exit code 2 at the CLI); the returned report tells
// the caller whether the model is probabilistically sound.
std::pair<HmmModel, ValidationReport> load_model(const std::string& path);
HmmModel parse_model_json(const std::string& text, const std::string& origin);
void save_model(const HmmModel& model, const std::string& path);

// Sequence files are UTF-8 text: one character per symbol when every
// alphabet token is a single character, whitespace-separated tokens
// otherwise. Whitespace (including newlines) never carries meaning.
void save_sequence(const SymbolSequence& seq, const std::string& path);
SymbolSequence load_sequence(const std::string& path, AlphabetPtr alphabet);

// Reads two sequence files over one inferred alphabet (the sorted union
// of the tokens seen in both files).
std::pair<SymbolSequence, SymbolSequence> load_sequence_pair(const std::string& y_path,
                                                             const std::string& x_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace zmest
