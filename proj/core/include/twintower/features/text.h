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

#ifndef TWINTOWER_FEATURES_TEXT_H_
#define TWINTOWER_FEATURES_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace twintower::features {

// Lowercases ASCII and splits on every non-alphanumeric byte.
std::vector<std::string> Tokenize(std::string_view text);

// Frozen pretrained word vectors plus the document frequencies used for
// TF-IDF weighting.
class WordVectorTable {
 public:
  explicit WordVectorTable(std::size_t dimension = 300);

  // Text format: header "<vocab_size> <dim>", then "<token> <f1> ... <fdim>".
  static WordVectorTable Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  // Throws InputError when the vector width differs from dimension().
  void Add(std::string token, std::vector<double> vector);
  const std::vector<double>* Find(const std::string& token) const;

  // Counts, per token, the documents containing it at least once.
  void FitDocumentFrequencies(std::span<const std::string> documents);
  void SetDocumentFrequency(const std::string& token, std::size_t df);
  void set_document_count(std::size_t n) { document_count_ = n; }

  std::size_t document_frequency(const std::string& token) const;
  std::size_t document_count() const { return document_count_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t vocabulary_size() const { return vectors_.size(); }
  // Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return order_; }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> df_;
  std::size_t document_count_ = 0;
};

// Sum over in-vocabulary tokens w of tf(w) * log(N / (1 + df(w))) * vec(w),
// where tf is the raw count in `text` and N the fitted document count.
// Zero vector when no token is in the vocabulary.
std::vector<double> EncodeSynopsis(std::string_view text,
                                   const WordVectorTable& table);

}  // namespace twintower::features

#endif  // TWINTOWER_FEATURES_TEXT_H_
