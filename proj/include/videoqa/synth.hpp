#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "videoqa/dataset.hpp"

namespace videoqa {

// Configuration of the synthetic corpus generator. Each video depicts one
// latent (actor, action, object) event; questions are templated over the
// event and answers derive from it, so every answer is recoverable from the
// video by construction.
struct SynthConfig {
    int n_videos = 500;
    int clips_min = 3;
    int clips_max = 5;
    int n_actors = 6;
    int n_actions = 6;
    int n_objects = 6;
    int feature_dim = 12;
    double feature_noise_sigma = 0.05;
    double noise_fraction = 0.10;  // consumed by inject_noise, not by generation
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    uint64_t seed = 1;

    void validate() const;
};

struct LatentEvent {
    std::string video_id;
    int actor = 0;
    int action = 0;
    int object = 0;
};

struct SynthCorpus {
    Dataset dataset;
    Vocabulary vocab;
    AnswerSpace answers;
    std::vector<LatentEvent> latents;

    const LatentEvent& latent(const std::string& video_id) const;
};

// Curated surface vocabulary for latent symbols (index < 12).
const std::vector<std::string>& synth_actor_names();
const std::vector<std::string>& synth_object_names();
// Verb pair: {third-person form, lemma}.
const std::vector<std::pair<std::string, std::string>>& synth_verbs();

// Fully seeded; identical config reproduces a bit-identical corpus.
SynthCorpus synth_generate(const SynthConfig& config);

void save_latents(const std::vector<LatentEvent>& latents, const std::filesystem::path& path);

}  // namespace videoqa
