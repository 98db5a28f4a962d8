// Copyright 2026 The TwinTower Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twintower/features/text.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "twintower/error.h"

namespace twintower::features {

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

WordVectorTable::WordVectorTable(std::size_t dimension)
    : dimension_(dimension) {
  if (dimension == 0) throw InputError("word vector dimension must be >= 1");
}

WordVectorTable WordVectorTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open word-vector file " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError(path.string() + ":1: missing header");
  }
  std::istringstream header(line);
  std::size_t vocab = 0, dim = 0;
  if (!(header >> vocab >> dim) || dim == 0) {
    throw InputError(path.string() + ":1: header must be '<vocab_size> <dim>'");
  }
  WordVectorTable table(dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> vec;
    vec.reserve(dim);
    double v;
    while (row >> v) vec.push_back(v);
    if (!row.eof() || vec.size() != dim) {
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(dim) +
                       " values for token '" + token + "'");
    }
    table.Add(std::move(token), std::move(vec));
  }
  if (table.vocabulary_size() != vocab) {
    throw InputError(path.string() + ": header declares " +
                     std::to_string(vocab) + " tokens, found " +
                     std::to_string(table.vocabulary_size()));
  }
  return table;
}

void WordVectorTable::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << order_.size() << ' ' << dimension_ << '\n';
  out.precision(17);
  for (const auto& token : order_) {
    out << token;
    for (double v : vectors_.at(token)) out << ' ' << v;
    out << '\n';
  }
}

void WordVectorTable::Add(std::string token, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw InputError("word vector for '" + token + "' has dimension " +
                     std::to_string(vector.size()) + ", table expects " +
                     std::to_string(dimension_));
  }
  auto [it, inserted] = vectors_.insert_or_assign(token, std::move(vector));
  if (inserted) order_.push_back(std::move(token));
}

const std::vector<double>* WordVectorTable::Find(const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

void WordVectorTable::FitDocumentFrequencies(
    std::span<const std::string> documents) {
  df_.clear();
  document_count_ = documents.size();
  for (const auto& doc : documents) {
    auto tokens = Tokenize(doc);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& t : unique) ++df_[t];
  }
}

void WordVectorTable::SetDocumentFrequency(const std::string& token,
                                           std::size_t df) {
  df_[token] = df;
}

std::size_t WordVectorTable::document_frequency(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

std::vector<double> EncodeSynopsis(std::string_view text,
                                   const WordVectorTable& table) {
  std::vector<double> out(table.dimension(), 0.0);
  // Ordered map: accumulation order is independent of token order.
  std::map<std::string, std::size_t> tf;
  for (auto& token : Tokenize(text)) {
    if (table.Find(token) != nullptr) ++tf[token];
  }
  double n = static_cast<double>(table.document_count());
  for (const auto& [token, count] : tf) {
    double idf =
        n > 0.0 ? std::log(n / (1.0 + static_cast<double>(
                                          table.document_frequency(token))))
                : 0.0;
    double weight = static_cast<double>(count) * idf;
    const auto& vec = *table.Find(token);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weight * vec[j];
  }
  return out;
}

}  // namespace twintower::features
