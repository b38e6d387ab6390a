#include "zmest/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace zmest {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

HmmModel parse_model_json(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": JSON parse error: " + e.what());
  }
  try {
    const auto alphabet = Alphabet::create(j.at("alphabet").get<std::vector<std::string>>());
    auto pi = j.at("pi").get<std::vector<double>>();
    auto P = Matrix::from_rows(j.at("P").get<std::vector<std::vector<double>>>());
    auto R = Matrix::from_rows(j.at("R").get<std::vector<std::vector<double>>>());
    return HmmModel::create(alphabet, std::move(pi), std::move(P), std::move(R));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": bad model document: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": bad model document: " + e.what());
  }
}

std::pair<HmmModel, ValidationReport> load_model(const std::string& path) {
  HmmModel model = parse_model_json(read_file(path), path);
  ValidationReport report = validate(model);
  return {std::move(model), std::move(report)};
}

void save_model(const HmmModel& model, const std::string& path) {
  nlohmann::json j;
  j["alphabet"] = model.alphabet->symbols();
  j["pi"] = model.pi;
  std::vector<std::vector<double>> p_rows, r_rows;
  for (std::size_t s = 0; s < model.state_count(); ++s) {
    p_rows.emplace_back(model.P.row(s).begin(), model.P.row(s).end());
    r_rows.emplace_back(model.R.row(s).begin(), model.R.row(s).end());
  }
  j["P"] = p_rows;
  j["R"] = r_rows;
  write_file(path, j.dump(2) + "\n");
}

void save_sequence(const SymbolSequence& seq, const std::string& path) {
  write_file(path, seq.to_string() + "\n");
}

namespace {

std::vector<std::string> tokenize(const std::string& text, bool single_char) {
  std::vector<std::string> tokens;
  if (single_char) {
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      tokens.emplace_back(1, c);
    }
  } else {
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
  }
  return tokens;
}

SymbolSequence sequence_from_tokens(const std::vector<std::string>& tokens,
                                    AlphabetPtr alphabet, const std::string& origin) {
  std::vector<Symbol> idx;
  idx.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto i = alphabet->index_of(tok);
    if (!i) throw std::runtime_error(origin + ": symbol '" + tok + "' not in alphabet");
    idx.push_back(*i);
  }
  return {std::move(alphabet), std::move(idx)};
}

}  // namespace

SymbolSequence load_sequence(const std::string& path, AlphabetPtr alphabet) {
  const std::string text = read_file(path);
  auto tokens = tokenize(text, alphabet->single_char());
  return sequence_from_tokens(tokens, std::move(alphabet), path);
}

std::pair<SymbolSequence, SymbolSequence> load_sequence_pair(const std::string& y_path,
                                                             const std::string& x_path) {
  const std::string y_text = read_file(y_path);
  const std::string x_text = read_file(x_path);
  // Single-char files are written as one unbroken run; token files carry
  // whitespace between tokens. So: several whitespace-separated chunks
  // with at least one of length > 1 means token mode, anything else is
  // read character by character. (A one-symbol multi-char-token file is
  // ambiguous and resolves to characters; see README.)
  auto words_of = [](const std::string& t) {
    std::istringstream is(t);
    std::vector<std::string> w;
    std::string tok;
    while (is >> tok) w.push_back(tok);
    return w;
  };
  const auto y_words = words_of(y_text);
  const auto x_words = words_of(x_text);
  auto is_token_mode = [](const std::vector<std::string>& w) {
    if (w.size() < 2) return false;
    for (const auto& t : w)
      if (t.size() > 1) return true;
    return false;
  };
  const bool token_mode = is_token_mode(y_words) || is_token_mode(x_words);
  const auto y_tokens = tokenize(y_text, !token_mode);
  const auto x_tokens = tokenize(x_text, !token_mode);

  std::set<std::string> seen(y_tokens.begin(), y_tokens.end());
  seen.insert(x_tokens.begin(), x_tokens.end());
  const auto alphabet = Alphabet::create({seen.begin(), seen.end()});
  return {sequence_from_tokens(y_tokens, alphabet, y_path),
          sequence_from_tokens(x_tokens, alphabet, x_path)};
}

}  // namespace zmest
