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


#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "testing.h"
#include "twintower/error.h"
#include "twintower/features/categorical.h"
#include "twintower/features/coverart.h"
#include "twintower/features/encoder.h"
#include "twintower/features/records.h"
#include "twintower/features/text.h"

namespace twintower::features {
namespace {

ItemMetadataRecord Item(std::string id, std::vector<std::string> genres,
                        int year, YearMonth month, std::int64_t views) {
  ItemMetadataRecord r;
  r.item_id = std::move(id);
  r.genres = std::move(genres);
  r.cast = {"ann", "bob"};
  r.maturity = "PG";
  r.country = "US";
  r.release_year = year;
  r.acquisition_month = month;
  r.view_count_long = views;
  r.view_count_recent = views;
  return r;
}

double Sum(const std::vector<double>& v, BlockRange b) {
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(b.offset),
                         v.begin() + static_cast<std::ptrdiff_t>(b.offset + b.width),
                         0.0);
}

TEST(PopularityTest, LogRatioBuckets) {
  // log(100) / log(10000) = 0.5.
  EXPECT_EQ(DiscretizePopularity(99, 9999, 10), 5u);
  EXPECT_EQ(DiscretizePopularity(0, 9999, 10), 0u);
  EXPECT_EQ(DiscretizePopularity(9999, 9999, 10), 9u);
  EXPECT_THROW(DiscretizePopularity(1, 0, 10), InputError);
  EXPECT_THROW(DiscretizePopularity(5, 4, 10), InputError);
}

TEST(YearMonthTest, ParseAndIndex) {
  YearMonth m = YearMonth::Parse("2019-12");
  EXPECT_EQ(m.year, 2019);
  EXPECT_EQ(m.month, 12);
  EXPECT_EQ(YearMonth::Parse("2020-01").Index() - m.Index(), 1);
  EXPECT_EQ(YearMonth::FromIndex(m.Index()), m);
  EXPECT_EQ(m.ToString(), "2019-12");
  EXPECT_THROW(YearMonth::Parse("2019-13"), InputError);
  EXPECT_THROW(YearMonth::Parse("201912"), InputError);
}

TEST(CategoryTest, Names) {
  EXPECT_EQ(ParseCategory("series"), ItemCategory::kSeries);
  EXPECT_EQ(CategoryName(ItemCategory::kMovie), "movie");
  EXPECT_THROW(ParseCategory("short"), InputError);
}

TEST(CategoricalSchemaTest, BlockLayoutAndOneHots) {
  std::vector<ItemMetadataRecord> corpus = {
      Item("a", {"drama", "crime"}, 1990, {2019, 1}, 10),
      Item("b", {"drama"}, 1995, {2019, 3}, 90),
  };
  SchemaConfig cfg;
  cfg.genre_slots = 5;
  cfg.cast_slots = 4;
  cfg.maturity_slots = 2;
  cfg.country_slots = 3;
  cfg.popularity_buckets = 10;
  auto schema = CategoricalSchema::Build(corpus, cfg);
  // Years 1990..1995 plus one overflow slot, months Jan..Mar plus one.
  EXPECT_EQ(schema.block(CategoricalBlock::kReleaseYear).width, 7u);
  EXPECT_EQ(schema.block(CategoricalBlock::kAcquisitionMonth).width, 4u);
  EXPECT_EQ(schema.dimension(), 5u + 4 + 2 + 3 + 7 + 4 + 10 + 10);
  EXPECT_EQ(schema.live_slots(CategoricalBlock::kGenre), 2u);

  auto v = schema.Encode(corpus[0]);
  EXPECT_EQ(Sum(v, schema.block(CategoricalBlock::kGenre)), 2.0);
  EXPECT_EQ(Sum(v, schema.block(CategoricalBlock::kCast)), 2.0);
  EXPECT_EQ(Sum(v, schema.block(CategoricalBlock::kReleaseYear)), 1.0);
  EXPECT_EQ(v[schema.block(CategoricalBlock::kReleaseYear).offset], 1.0);
  // "drama" is the most frequent genre and takes slot 0.
  EXPECT_EQ(v[schema.block(CategoricalBlock::kGenre).offset], 1.0);
  // 10 of 100 total views: floor(10 * log(11) / log(101)) = 5.
  EXPECT_EQ(v[schema.block(CategoricalBlock::kPopularityLong).offset + 5], 1.0);

  ItemMetadataRecord late = Item("c", {"western"}, 2010, {2021, 6}, 500);
  auto w = schema.Encode(late);
  EXPECT_EQ(Sum(w, schema.block(CategoricalBlock::kGenre)), 0.0);
  auto year = schema.block(CategoricalBlock::kReleaseYear);
  EXPECT_EQ(w[year.offset + year.width - 1], 1.0);
  auto pop = schema.block(CategoricalBlock::kPopularityLong);
  EXPECT_EQ(w[pop.offset + pop.width - 1], 1.0);
}

TEST(CategoricalSchemaTest, VocabularyCapacityKeepsMostFrequent) {
  std::vector<ItemMetadataRecord> corpus = {
      Item("a", {"x", "y"}, 2000, {2019, 1}, 1),
      Item("b", {"y", "z"}, 2000, {2019, 1}, 1),
      Item("c", {"y", "z"}, 2000, {2019, 1}, 1),
  };
  SchemaConfig cfg;
  cfg.genre_slots = 2;
  auto schema = CategoricalSchema::Build(corpus, cfg);
  auto j = schema.ToJson();
  EXPECT_EQ(j["genre"], nlohmann::json({"y", "z"}));
  EXPECT_EQ(Sum(schema.Encode(corpus[0]), schema.block(CategoricalBlock::kGenre)),
            1.0);
}

TEST(CategoricalSchemaTest, HashTracksVocabulary) {
  std::vector<ItemMetadataRecord> a = {Item("a", {"x"}, 2000, {2019, 1}, 1)};
  std::vector<ItemMetadataRecord> b = {Item("a", {"w"}, 2000, {2019, 1}, 1)};
  EXPECT_EQ(CategoricalSchema::Build(a).Hash(), CategoricalSchema::Build(a).Hash());
  EXPECT_NE(CategoricalSchema::Build(a).Hash(), CategoricalSchema::Build(b).Hash());
  EXPECT_THROW(CategoricalSchema::Build(std::vector<ItemMetadataRecord>{}),
               InputError);
}

TEST(TextTest, Tokenize) {
  EXPECT_EQ(Tokenize("A man's  WAR-story, 1999!"),
            (std::vector<std::string>{"a", "man", "s", "war", "story", "1999"}));
  EXPECT_TRUE(Tokenize(" ,. ").empty());
}

TEST(TextTest, TfIdfWeightedSum) {
  WordVectorTable t(2);
  t.Add("red", {1.0, 0.0});
  t.Add("car", {0.0, 2.0});
  std::vector<std::string> docs = {"red car", "red", "blue", "green"};
  t.FitDocumentFrequencies(docs);
  EXPECT_EQ(t.document_count(), 4u);
  EXPECT_EQ(t.document_frequency("red"), 2u);
  EXPECT_EQ(t.document_frequency("car"), 1u);
  auto v = EncodeSynopsis("Red red CAR unknown", t);
  // red: tf 2, idf log(4/3); car: tf 1, idf log(4/2).
  EXPECT_NEAR(v[0], 2.0 * std::log(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(v[1], 2.0 * std::log(2.0), 1e-15);
  EXPECT_EQ(EncodeSynopsis("nothing known", t), (std::vector<double>{0, 0}));
  EXPECT_THROW(t.Add("bad", {1.0}), InputError);
}

TEST(TextTest, WordVectorFileRoundTrip) {
  testing::TempDir dir;
  WordVectorTable t(3);
  t.Add("alpha", {0.1, -2.5, 3e-7});
  t.Add("beta", {1.0 / 3.0, 0.0, -1.0});
  t.Save(dir.path() / "wv.txt");
  auto u = WordVectorTable::Load(dir.path() / "wv.txt");
  EXPECT_EQ(u.dimension(), 3u);
  EXPECT_EQ(u.tokens(), t.tokens());
  EXPECT_EQ(*u.Find("beta"), *t.Find("beta"));
  EXPECT_THROW(WordVectorTable::Load(dir.path() / "missing.txt"), InputError);
}

TEST(CoverArtTest, MissingVectorsAreZeroAndFlagged) {
  CoverArtStore store(4);
  store.Ingest("a", {1, 2, 3, 4});
  EXPECT_FALSE(store.Get("a").missing);
  auto miss = store.Get("b");
  EXPECT_TRUE(miss.missing);
  EXPECT_EQ(miss.vector, std::vector<double>(4, 0.0));
  EXPECT_THROW(store.Ingest("c", {1, 2}), InputError);
}

TEST(CoverArtTest, PseudoVectorsAreUnitAndDeterministic) {
  auto a = PseudoCoverArt("item_1", 3, 512);
  auto b = PseudoCoverArt("item_1", 3, 512);
  auto c = PseudoCoverArt("item_2", 3, 512);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  double norm = 0.0;
  for (double x : a) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(EncoderTest, ChannelsAndIdIndex) {
  data::Dataset ds = testing::TinyDataset(3, 4, 8);
  ds.words.FitDocumentFrequencies(std::vector<std::string>{ds.items[0].synopsis});
  auto schema = CategoricalSchema::Build(ds.items, testing::TinySchema());
  ItemFeatureEncoder enc(schema, ds.words, ds.coverart);
  auto f = enc.Encode(ds.items[0], 5);
  EXPECT_EQ(f.categorical, schema.Encode(ds.items[0]));
  EXPECT_EQ(f.synopsis, EncodeSynopsis(ds.items[0].synopsis, ds.words));
  EXPECT_EQ(f.coverart.size(), 4u);
  EXPECT_EQ(f.id_index, std::optional<std::size_t>(5));
  // Item 3 has no cover art in the tiny dataset.
  auto g = enc.Encode(ds.items[3], std::nullopt);
  EXPECT_TRUE(g.coverart_missing);
  EXPECT_FALSE(g.id_index.has_value());
}

TEST(UserFeatureSchemaTest, OneHotPerFeature) {
  std::vector<UserProfile> users = {
      {"u1", {{"country", "FR"}, {"plan", "basic"}}},
      {"u2", {{"country", "DE"}}},
  };
  auto s = UserFeatureSchema::Build(users);
  EXPECT_EQ(s.dimension(), 3u);
  // Features in name order, values sorted: country{DE, FR}, plan{basic}.
  EXPECT_EQ(s.Encode(users[0].features), (std::vector<double>{0, 1, 1}));
  EXPECT_EQ(s.Encode({{"country", "JP"}}), (std::vector<double>{0, 0, 0}));
  auto t = UserFeatureSchema::FromJson(s.ToJson());
  EXPECT_EQ(t.Encode(users[1].features), s.Encode(users[1].features));
}

}  // namespace
}  // namespace twintower::features
