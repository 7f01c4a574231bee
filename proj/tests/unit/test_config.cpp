#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qdirac/commands.hpp"
#include "qdirac/config.hpp"

namespace qdirac {
namespace {

TEST(Config, DefaultsMatchDocumentation) {
  const ExperimentConfig c;
  EXPECT_EQ(c.trunc.n_max, 16);
  EXPECT_EQ(c.trunc.k_max, 512);
  EXPECT_EQ(c.trunc.k_tail, 4096);
  EXPECT_EQ(c.trunc.margin, 8);
  EXPECT_EQ(c.trunc.tol_identity, 1e-10);
  EXPECT_EQ(c.trunc.tol_tail, 1e-12);
  EXPECT_EQ(c.trunc.tol_trace, 1e-8);
  EXPECT_EQ(c.grid, 512);
  EXPECT_EQ(c.samples, 20);
}

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.family.q = 0.3;
  c.trunc.k_max = 200;
  c.trunc.tol_trace = 3e-9;
  c.seed = 987654321987ULL;
  c.output = "elsewhere";
  const std::string text = dump_config(c);
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(dump_config(back), text);
  EXPECT_EQ(back.family.q, 0.3);
  EXPECT_EQ(back.seed, 987654321987ULL);
  EXPECT_EQ(back.trunc.tol_trace, 3e-9);
}

TEST(Config, PartialDocumentKeepsDefaults) {
  const auto c = parse_config("family:\n  q: 0.25\ntruncation:\n  k_max: 200\n");
  EXPECT_EQ(c.family.q, 0.25);
  EXPECT_EQ(c.trunc.k_max, 200);
  EXPECT_EQ(c.trunc.n_max, 16);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* text : {"famly:\n  q: 0.5\n", "truncation:\n  kmax: 3\n",
                           "samples: many\n", "- 1\n- 2\n"}) {
    try {
      parse_config(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigParse) << text;
    }
  }
}

TEST(Config, MakeFamily) {
  FamilySpec spec;
  spec.name = "geometric";
  EXPECT_DOUBLE_EQ(make_family(spec).a(1, 1), 4.0);
  spec.name = "q";
  spec.q = 1.0;
  EXPECT_THROW(make_family(spec), Error);
  spec.name = "unknown";
  EXPECT_THROW(make_family(spec), Error);
}

TEST(Config, FormatReal) {
  EXPECT_EQ(format_real(3.0), "3");
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(1.0 / 0.0), ".inf");
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.trunc.n_max = 6;
  c.trunc.k_max = 96;
  c.samples = 3;
  c.hs_to = 5;
  c.grid = 128;
  c.classical_to = 6;
  c.classical_modes = 4;
  return c;
}

TEST(Commands, DeterministicDocuments) {
  const auto c = small_config();
  for (auto cmd : {&cmd_validate, &cmd_verify, &cmd_kernel}) {
    const auto a = (*cmd)(c);
    const auto b = (*cmd)(c);
    ASSERT_EQ(a.documents.size(), b.documents.size());
    for (std::size_t i = 0; i < a.documents.size(); ++i) {
      EXPECT_EQ(a.documents[i].name, b.documents[i].name);
      EXPECT_EQ(a.documents[i].content, b.documents[i].content);
    }
    EXPECT_TRUE(a.pass) << a.command << ": " << a.summary;
  }
}

TEST(Commands, DocumentsEmbedConfigAndSeed) {
  const auto result = cmd_verify(small_config());
  for (const auto& doc : result.documents) {
    EXPECT_NE(doc.content.find("12345"), std::string::npos) << doc.name;
    EXPECT_NE(doc.content.find("k_max"), std::string::npos) << doc.name;
  }
}

TEST(Commands, FailureIsReported) {
  auto c = small_config();
  c.family.name = "constant-a";
  const auto result = cmd_validate(c);
  EXPECT_FALSE(result.pass);
  bool mentions = false;
  for (const auto& doc : result.documents) {
    mentions |= doc.content.find("DivergentSum") != std::string::npos;
  }
  EXPECT_TRUE(mentions);
}

TEST(Commands, WriteDocuments) {
  const auto dir = std::filesystem::temp_directory_path() / "qdirac_config_test";
  std::filesystem::remove_all(dir);
  const auto result = cmd_validate(small_config());
  write_documents(result, dir.string());
  for (const auto& doc : result.documents) {
    std::ifstream in(dir / doc.name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), doc.content);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qdirac
