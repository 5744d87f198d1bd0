#pragma once

// Hand-annotated sentences, seeds and lexical resources used across tests.

#include <filesystem>
#include <string>
#include <vector>

#include "gen/annotation.hpp"
#include "gen/resources.hpp"
#include "gen/session.hpp"

namespace fixtures {

struct FrameSpec {
  std::size_t predicate;
  std::vector<std::pair<std::string, gen::TokenSpan>> args;
};

// Tree leaves are `(TAG surface[/lemma[/NE]])`; underscores in the surface
// become spaces. Token indices follow leaf order.
gen::AnnotatedSentence sentence(const std::string& id, const std::string& bracketed,
                                const std::vector<FrameSpec>& frames = {});

// Space-separated `surface/POS[/lemma[/NE]]` items.
std::vector<gen::Token> tokens(const std::string& spec);

gen::Seed seed(const std::string& id, const gen::AnnotatedSentence& s, const std::string& question,
               gen::TokenSpan answer);

// Directory holding the fixture resource files (written once per process).
const std::filesystem::path& resource_dir();
const gen::ResourceBundle& resources();

gen::Seed telephone_seed();
gen::AnnotatedSentence vasco_sentence();

// The eight bootstrap seeds with their support sentences.
std::vector<gen::Seed> bootstrap_seeds();
// Unseen sentences in the style of the bootstrap seeds.
std::vector<gen::AnnotatedSentence> bootstrap_corpus();

// 30 "PERSON VERB the OBJECT" sentences over three verbs linked by verb-sense
// classes, a good and a bad seed, and a reference holding the wanted question.
struct Synthetic {
  std::vector<gen::AnnotatedSentence> corpus;
  std::vector<gen::Seed> seeds;  // good first, then bad
  gen::Reference reference;
};
Synthetic synthetic(std::size_t sentences = 30);

// Writes corpus.json, seeds.json, reference.json and resources/ into `dir`.
void write_files(const std::filesystem::path& dir, const std::vector<gen::AnnotatedSentence>& corpus,
                 const std::vector<gen::Seed>& seeds, const gen::Reference& reference);

std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixtures
