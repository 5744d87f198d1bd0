#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gen/resources.hpp"

using namespace gen;

TEST(Resources, SenseInventoryClassesOfLemma) {
  const auto inv = SenseInventory::parse("Building\tmake build\nCreating\tcreate invent make\n");
  EXPECT_EQ(inv.classes_of("make"), (std::set<std::string>{"Building", "Creating"}));
  EXPECT_TRUE(inv.classes_of("eat").empty());
}

TEST(Resources, SynsetLeastCommonSubsumer) {
  const auto& g = fixtures::resources().synsets;
  auto h = g.least_common_subsumer({"dog.n.01"}, {"cat.n.01"});
  ASSERT_TRUE(h);
  EXPECT_EQ(h->subsumer, "carnivore.n.01");
  EXPECT_EQ(h->from_a, 2);
  EXPECT_EQ(h->from_b, 2);
  h = g.least_common_subsumer({"feline.n.01"}, {"cat.n.01"});
  ASSERT_TRUE(h);
  EXPECT_EQ(h->subsumer, "feline.n.01");
  EXPECT_EQ(h->from_a, 0);
  EXPECT_EQ(h->from_b, 1);
  EXPECT_THROW(g.least_common_subsumer({"unicorn.n.01"}, {"cat.n.01"}), ResourceError);
}

TEST(Resources, BlocklistedSubsumerNeverQualifies) {
  const auto g = SynsetGraph::parse("a\troot\nb\troot\n#blocklist:\nroot\n");
  EXPECT_FALSE(g.least_common_subsumer({"a"}, {"b"}));
}

TEST(Resources, HopCapLimitsSearch) {
  const auto g = SynsetGraph::parse("a\tx1\nx1\tx2\nx2\ttop\nb\ttop\n");
  EXPECT_TRUE(g.least_common_subsumer({"a"}, {"b"}, 3));
  EXPECT_FALSE(g.least_common_subsumer({"a"}, {"b"}, 2));
}

TEST(Resources, EmbeddingsParseAndValidate) {
  const auto t = EmbeddingTable::parse("2 3\nx 1 0 0\ny 0 1 0\n");
  EXPECT_EQ(t.dim(), 3u);
  ASSERT_NE(t.find("y"), nullptr);
  EXPECT_EQ(t.find("z"), nullptr);
  EXPECT_THROW(EmbeddingTable::parse("1 3\nx 1 0\n"), ResourceError);
  EXPECT_THROW(EmbeddingTable::parse("2 2\nx 1 0\n"), ResourceError);
}

TEST(Resources, CosineMatchesHandComputation) {
  EXPECT_DOUBLE_EQ(cosine({1, 0}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(cosine({3, 4}, {3, 4}), 1.0);
  EXPECT_NEAR(cosine({1, 2}, {2, 1}), 4.0 / 5.0, 1e-12);
}

TEST(Resources, NeInclusion) {
  const auto r = NeInclusionRules::defaults();
  EXPECT_TRUE(r.includes("Alexander Graham Bell", "Graham Bell", "Person"));
  EXPECT_TRUE(r.includes("Bell", "Alexander Graham Bell", "Person"));
  EXPECT_FALSE(r.includes("Bell Graham", "Alexander Graham Bell", "Person"));
  EXPECT_TRUE(r.includes("D01 M01 Y2014", "M01 Y2014", "Date"));
  EXPECT_FALSE(r.includes("D01 M01 Y2014", "D02", "Date"));
  EXPECT_FALSE(r.includes("Bell", "Bell", "Vehicle"));
}

TEST(Resources, DateFields) {
  EXPECT_EQ(date_fields("D01 M01 Y2014"), (std::set<std::string>{"D01", "M01", "Y2014"}));
  EXPECT_TRUE(date_fields("yesterday").empty());
}

TEST(Resources, StopwordsAreCaseInsensitive) {
  const auto sw = Stopwords::defaults();
  EXPECT_TRUE(sw.contains("The"));
  EXPECT_TRUE(sw.contains("who"));
  EXPECT_FALSE(sw.contains("telephone"));
}

TEST(Resources, VerbFormsIrregularThenRegular) {
  const auto& v = fixtures::resources().verbs;
  EXPECT_EQ(v.forms("take").past, "took");
  EXPECT_EQ(v.forms("discover").past, "discovered");
  EXPECT_EQ(v.forms("discover").third_singular, "discovers");
  EXPECT_EQ(v.forms("create").past, "created");
  EXPECT_EQ(v.forms("create").gerund, "creating");
  EXPECT_EQ(v.forms("carry").past, "carried");
  EXPECT_EQ(v.forms("watch").third_singular, "watches");
}

TEST(Resources, LoadDirectoryReadsAllFiles) {
  const auto& r = fixtures::resources();
  EXPECT_FALSE(r.senses.empty());
  EXPECT_TRUE(r.synsets.contains("cat.n.01"));
  EXPECT_EQ(r.embeddings.dim(), 8u);
}

TEST(Resources, MalformedFilesNameTheProblem) {
  EXPECT_THROW(SenseInventory::parse("no-tab-here\n"), ResourceError);
  EXPECT_THROW(SynsetGraph::parse("a\tb\tc\n"), ResourceError);
}
