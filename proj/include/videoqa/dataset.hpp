#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "videoqa/tensor.hpp"

namespace videoqa {

enum class Split { Train, Val, Test };
enum class QaSource { AutoQG, SynthesizedNo, Human, Synthetic };

std::string to_string(Split s);
std::string to_string(QaSource s);
Split split_from_string(const std::string& s);
QaSource qa_source_from_string(const std::string& s);

// One video observation: a sequence of pooled clip feature vectors,
// stored as a [clip_count x feature_dim] tensor.
struct VideoFeatures {
    enum class Source { Ingested, Synthetic, Dummy };

    std::string video_id;
    Tensor clips;
    Source source = Source::Ingested;

    int clip_count() const { return clips.dim(0); }
    int feature_dim() const { return clips.dim(1); }
    bool is_dummy() const { return clips.all_zero(); }
};

// All-zero observation with the same clip count as `like`.
VideoFeatures dummy_video(const VideoFeatures& like);

// One (video, question, answer) example. Token fields hold the
// preprocessed forms; *_raw hold the strings as stored on disk.
struct Triplet {
    int id = -1;
    std::string video_id;
    std::string question_raw;
    std::string answer_raw;
    std::vector<std::string> question;  // preprocessed question tokens
    std::vector<std::string> answer;    // answer tokens after stop-word removal
    std::string answer_text;            // canonical joined answer
    int answer_class = -1;              // index into AnswerSpace, -1 when absent
    QaSource qa_source = QaSource::AutoQG;
    Split split = Split::Train;
};

// Top-K most frequent answers over the training and validation splits,
// most frequent first, frequency ties broken lexicographically.
class AnswerSpace {
public:
    static AnswerSpace build(const std::vector<Triplet>& triplets, int k);

    int index_of(const std::string& answer) const;
    const std::string& answer(int idx) const { return answers_[static_cast<size_t>(idx)]; }
    const std::vector<std::string>& answers() const { return answers_; }
    int size() const { return static_cast<int>(answers_.size()); }
    // Fraction of train+val answers covered by the retained classes.
    double coverage() const { return coverage_; }

private:
    std::vector<std::string> answers_;
    std::unordered_map<std::string, int> index_;
    double coverage_ = 0.0;
};

// Question-token index map with the special tokens always present at the
// front: <NUMBER>, <UNK>, <EOS>, <BOS>. Remaining tokens sorted.
class Vocabulary {
public:
    // Built over train+val question tokens; answer tokens are included
    // too when `include_answers` (needed for sequence decoding).
    static Vocabulary build(const std::vector<Triplet>& triplets, bool include_answers);

    int id(const std::string& token) const;  // <UNK> id for unknown tokens
    const std::string& token(int id) const { return tokens_[static_cast<size_t>(id)]; }
    int size() const { return static_cast<int>(tokens_.size()); }
    int number_id() const { return 0; }
    int unk_id() const { return 1; }
    int eos_id() const { return 2; }
    int bos_id() const { return 3; }

    std::vector<int> encode(const std::vector<std::string>& tokens) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
};

struct Dataset {
    int feature_dim = 0;
    std::vector<VideoFeatures> videos;
    std::vector<Triplet> triplets;

    const VideoFeatures& video(const std::string& video_id) const;
    bool has_video(const std::string& video_id) const;
    std::vector<const Triplet*> of_split(Split s) const;
    void rebuild_video_index();
    // Throws DataError when a video id appears in more than one split.
    void check_split_integrity() const;

private:
    std::unordered_map<std::string, size_t> video_index_;
};

// Partitions frames into at most `max_clips` contiguous groups with sizes
// differing by at most one, and mean-pools each group.
Tensor pool_clips(const Tensor& frames, int max_clips);

// Hidden ground truth of the noise injector. Never visible to training.
struct NoiseReport {
    double fraction = 0.0;
    uint64_t seed = 0;
    std::vector<int> corrupted_ids;  // triplet ids, ascending

    bool is_corrupted(int triplet_id) const;
};

// Remaps ceil(p * n_train) uniformly chosen train triplets to a different
// train-split video, making the QA pair irrelevant to the observed content.
NoiseReport inject_noise(Dataset& ds, double p, uint64_t seed);

void save_noise_report(const NoiseReport& r, const std::filesystem::path& path);
NoiseReport load_noise_report(const std::filesystem::path& path);

// Dataset directory layout: manifest.json + qa.jsonl + features/<video_id>.vqaf
// (binary, magic "VQAF") with a features/<video_id>.csv fallback for
// hand-authored fixtures.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& manifest_path);

// Content hash over the canonical serialization (order-stable).
uint64_t corpus_hash(const Dataset& ds);

}  // namespace videoqa
