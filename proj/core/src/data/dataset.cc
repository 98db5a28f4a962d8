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

#include "twintower/data/dataset.h"

#include <fstream>
#include <functional>
#include <unordered_set>

#include "twintower/error.h"

namespace twintower::data {
namespace {

using nlohmann::json;

// Calls `fn(json, lineno)` for each non-blank line; wraps parse and schema
// errors with the file and line number.
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " +
                       e.what());
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

DatasetPaths DatasetPaths::InDirectory(const std::filesystem::path& dir) {
  DatasetPaths p;
  p.metadata = dir / "metadata.jsonl";
  p.interactions = dir / "interactions.jsonl";
  p.users = dir / "users.jsonl";
  p.word_vectors = dir / "word_vectors.txt";
  p.coverart = dir / "coverart.jsonl";
  return p;
}

nlohmann::json IngestReport::ToJson() const {
  return json{{"interactions_read", interactions_read},
              {"dropped_unknown_item", dropped_unknown_item},
              {"dropped_unknown_user", dropped_unknown_user},
              {"coverart_unknown_item", coverart_unknown_item}};
}

json ItemToJson(const ItemMetadataRecord& item) {
  json j{{"item_id", item.item_id},
         {"category", CategoryName(item.category)},
         {"genres", item.genres},
         {"cast", item.cast},
         {"maturity", item.maturity},
         {"country", item.country},
         {"release_year", item.release_year},
         {"acquisition_month", item.acquisition_month.ToString()},
         {"view_count_long", item.view_count_long},
         {"view_count_recent", item.view_count_recent},
         {"synopsis", item.synopsis}};
  if (item.coverart_vector) j["coverart_vector"] = *item.coverart_vector;
  return j;
}

ItemMetadataRecord ItemFromJson(const json& j) {
  ItemMetadataRecord r;
  j.at("item_id").get_to(r.item_id);
  r.category = ParseCategory(j.at("category").get<std::string>());
  r.genres = j.value("genres", std::vector<std::string>{});
  r.cast = j.value("cast", std::vector<std::string>{});
  r.maturity = j.value("maturity", std::string{});
  r.country = j.value("country", std::string{});
  j.at("release_year").get_to(r.release_year);
  r.acquisition_month =
      YearMonth::Parse(j.at("acquisition_month").get<std::string>());
  r.view_count_long = j.value("view_count_long", std::int64_t{0});
  r.view_count_recent = j.value("view_count_recent", std::int64_t{0});
  if (r.view_count_long < 0 || r.view_count_recent < 0) {
    throw InputError("view counts must be nonnegative for item " + r.item_id);
  }
  r.synopsis = j.value("synopsis", std::string{});
  if (j.contains("coverart_vector") && !j.at("coverart_vector").is_null()) {
    r.coverart_vector = j.at("coverart_vector").get<std::vector<double>>();
  }
  return r;
}

Dataset Ingest(const DatasetPaths& paths, IngestReport* report) {
  IngestReport local;
  IngestReport& rep = report != nullptr ? *report : local;
  rep = IngestReport{};

  Dataset ds;
  ds.words = features::WordVectorTable::Load(paths.word_vectors);

  std::unordered_set<std::string> item_ids;
  ForEachJsonLine(paths.metadata, [&](const json& j) {
    ItemMetadataRecord r = ItemFromJson(j);
    if (!item_ids.insert(r.item_id).second) {
      throw InputError("duplicate item_id '" + r.item_id + "'");
    }
    ds.items.push_back(std::move(r));
  });

  std::unordered_set<std::string> user_ids;
  ForEachJsonLine(paths.users, [&](const json& j) {
    UserProfile u;
    j.at("user_id").get_to(u.user_id);
    u.features = j.value("features", std::map<std::string, std::string>{});
    if (!u.features.contains("country")) {
      throw InputError("user '" + u.user_id + "' has no country feature");
    }
    if (!user_ids.insert(u.user_id).second) {
      throw InputError("duplicate user_id '" + u.user_id + "'");
    }
    ds.users.push_back(std::move(u));
  });

  ForEachJsonLine(paths.interactions, [&](const json& j) {
    Interaction row;
    j.at("user_id").get_to(row.user_id);
    j.at("item_id").get_to(row.item_id);
    j.at("ts").get_to(row.ts);
    if (row.ts < 0) throw InputError("negative timestamp");
    ++rep.interactions_read;
    if (!item_ids.contains(row.item_id)) {
      ++rep.dropped_unknown_item;
      return;
    }
    if (!user_ids.contains(row.user_id)) {
      ++rep.dropped_unknown_user;
      return;
    }
    ds.interactions.push_back(std::move(row));
  });

  std::size_t art_dim = features::kDefaultCoverArtDimension;
  for (const auto& item : ds.items) {
    if (item.coverart_vector) {
      art_dim = item.coverart_vector->size();
      break;
    }
  }
  std::vector<std::pair<std::string, std::vector<double>>> art_rows;
  if (!paths.coverart.empty() && std::filesystem::exists(paths.coverart)) {
    ForEachJsonLine(paths.coverart, [&](const json& j) {
      art_rows.emplace_back(j.at("item_id").get<std::string>(),
                            j.at("vector").get<std::vector<double>>());
    });
    if (!art_rows.empty()) art_dim = art_rows.front().second.size();
  }
  ds.coverart = features::CoverArtStore(art_dim);
  for (const auto& item : ds.items) {
    if (item.coverart_vector) ds.coverart.Ingest(item.item_id, *item.coverart_vector);
  }
  for (auto& [id, vec] : art_rows) {
    if (!item_ids.contains(id)) {
      ++rep.coverart_unknown_item;
      continue;
    }
    ds.coverart.Ingest(id, std::move(vec));
  }
  return ds;
}

void WriteDataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetPaths p = DatasetPaths::InDirectory(dir);
  {
    auto out = OpenForWrite(p.metadata);
    for (const auto& item : ds.items) out << ItemToJson(item).dump() << '\n';
  }
  {
    auto out = OpenForWrite(p.users);
    for (const auto& u : ds.users) {
      out << json{{"user_id", u.user_id}, {"features", u.features}}.dump()
          << '\n';
    }
  }
  {
    auto out = OpenForWrite(p.interactions);
    for (const auto& row : ds.interactions) {
      out << json{{"user_id", row.user_id},
                  {"item_id", row.item_id},
                  {"ts", row.ts}}
                 .dump()
          << '\n';
    }
  }
  {
    auto out = OpenForWrite(p.coverart);
    for (const auto& [id, vec] : ds.coverart.entries()) {
      out << json{{"item_id", id}, {"vector", vec}}.dump() << '\n';
    }
  }
  ds.words.Save(p.word_vectors);
}

double Density(std::size_t watches, std::size_t users, std::size_t items) {
  if (users == 0 || items == 0) return 0.0;
  return static_cast<double>(watches) /
         (static_cast<double>(users) * static_cast<double>(items));
}

}  // namespace twintower::data
