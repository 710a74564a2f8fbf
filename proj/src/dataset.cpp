#include "videoqa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "videoqa/errors.hpp"
#include "videoqa/rng.hpp"
#include "videoqa/serialize.hpp"
#include "videoqa/textproc.hpp"

namespace videoqa {

using nlohmann::json;

std::string to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

std::string to_string(QaSource s) {
    switch (s) {
        case QaSource::AutoQG: return "auto-QG";
        case QaSource::SynthesizedNo: return "synthesized-No";
        case QaSource::Human: return "human";
        case QaSource::Synthetic: return "synthetic";
    }
    return "?";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    throw DataError("invalid split tag '" + s + "'");
}

QaSource qa_source_from_string(const std::string& s) {
    if (s == "auto-QG") return QaSource::AutoQG;
    if (s == "synthesized-No") return QaSource::SynthesizedNo;
    if (s == "human") return QaSource::Human;
    if (s == "synthetic") return QaSource::Synthetic;
    throw DataError("invalid qa_source tag '" + s + "'");
}

VideoFeatures dummy_video(const VideoFeatures& like) {
    VideoFeatures d;
    d.video_id = like.video_id + "#dummy";
    d.clips = Tensor::zeros(like.clips.shape);
    d.source = VideoFeatures::Source::Dummy;
    return d;
}

AnswerSpace AnswerSpace::build(const std::vector<Triplet>& triplets, int k) {
    if (k <= 0) throw ConfigError("answer space size K must be positive");
    std::map<std::string, int64_t> freq;
    int64_t total = 0;
    for (const auto& t : triplets) {
        if (t.split == Split::Test) continue;
        if (t.answer_text.empty()) continue;
        ++freq[t.answer_text];
        ++total;
    }
    std::vector<std::pair<std::string, int64_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    AnswerSpace space;
    int64_t covered = 0;
    for (const auto& [answer, count] : ranked) {
        if (space.size() >= k) break;
        space.index_.emplace(answer, space.size());
        space.answers_.push_back(answer);
        covered += count;
    }
    space.coverage_ = total > 0 ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;
    return space;
}

int AnswerSpace::index_of(const std::string& answer) const {
    auto it = index_.find(answer);
    return it == index_.end() ? -1 : it->second;
}

Vocabulary Vocabulary::build(const std::vector<Triplet>& triplets, bool include_answers) {
    std::set<std::string> words;
    for (const auto& t : triplets) {
        if (t.split == Split::Test) continue;
        words.insert(t.question.begin(), t.question.end());
        if (include_answers) words.insert(t.answer.begin(), t.answer.end());
    }
    Vocabulary v;
    v.tokens_ = {kNumberToken, kUnkToken, kEosToken, kBosToken};
    for (const auto& t : v.tokens_) v.index_.emplace(t, static_cast<int>(v.index_.size()));
    for (const auto& w : words) {
        if (!v.index_.count(w)) {
            v.index_.emplace(w, static_cast<int>(v.tokens_.size()));
            v.tokens_.push_back(w);
        }
    }
    return v;
}

int Vocabulary::id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? unk_id() : it->second;
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
}

const VideoFeatures& Dataset::video(const std::string& video_id) const {
    auto it = video_index_.find(video_id);
    if (it == video_index_.end()) throw DataError("unknown video id '" + video_id + "'");
    return videos[it->second];
}

bool Dataset::has_video(const std::string& video_id) const { return video_index_.count(video_id) > 0; }

std::vector<const Triplet*> Dataset::of_split(Split s) const {
    std::vector<const Triplet*> out;
    for (const auto& t : triplets) {
        if (t.split == s) out.push_back(&t);
    }
    return out;
}

void Dataset::rebuild_video_index() {
    video_index_.clear();
    for (size_t i = 0; i < videos.size(); ++i) {
        auto [it, inserted] = video_index_.emplace(videos[i].video_id, i);
        (void)it;
        if (!inserted) throw DataError("duplicate video id '" + videos[i].video_id + "'");
    }
}

void Dataset::check_split_integrity() const {
    std::unordered_map<std::string, Split> seen;
    for (const auto& t : triplets) {
        auto [it, inserted] = seen.emplace(t.video_id, t.split);
        if (!inserted && it->second != t.split) {
            throw DataError("video '" + t.video_id + "' appears in splits " + to_string(it->second) +
                            " and " + to_string(t.split));
        }
    }
}

Tensor pool_clips(const Tensor& frames, int max_clips) {
    if (frames.ndim() != 2 || frames.dim(0) < 1) {
        throw DimensionError("pool_clips: expected [frames x dim] with at least one frame");
    }
    if (max_clips < 1) throw ConfigError("pool_clips: max_clips must be >= 1");
    int n = frames.dim(0), d = frames.dim(1);
    int m = std::min(n, max_clips);
    Tensor out = Tensor::zeros({m, d});
    // Contiguous near-equal partition: the first (n % m) groups get one extra frame.
    int base = n / m, extra = n % m;
    int start = 0;
    for (int g = 0; g < m; ++g) {
        int len = base + (g < extra ? 1 : 0);
        for (int f = start; f < start + len; ++f) {
            for (int j = 0; j < d; ++j) out.at(g, j) += frames.at(f, j);
        }
        for (int j = 0; j < d; ++j) out.at(g, j) /= len;
        start += len;
    }
    return out;
}

bool NoiseReport::is_corrupted(int triplet_id) const {
    return std::binary_search(corrupted_ids.begin(), corrupted_ids.end(), triplet_id);
}

NoiseReport inject_noise(Dataset& ds, double p, uint64_t seed) {
    if (p < 0.0 || p >= 1.0) throw ConfigError("noise fraction must be in [0, 1)");
    NoiseReport report;
    report.fraction = p;
    report.seed = seed;
    if (p == 0.0) return report;

    std::vector<size_t> train_idx;
    std::set<std::string> train_videos;
    for (size_t i = 0; i < ds.triplets.size(); ++i) {
        if (ds.triplets[i].split == Split::Train) {
            train_idx.push_back(i);
            train_videos.insert(ds.triplets[i].video_id);
        }
    }
    std::vector<std::string> video_pool(train_videos.begin(), train_videos.end());
    if (video_pool.size() < 2) throw DataError("noise injection needs at least two train videos");

    int64_t n = static_cast<int64_t>(train_idx.size());
    auto to_flag = static_cast<size_t>(std::ceil(p * static_cast<double>(n)));

    Rng rng(seed);
    std::vector<size_t> order = train_idx;
    rng.shuffle(order);
    order.resize(std::min(to_flag, order.size()));
    for (size_t idx : order) {
        Triplet& t = ds.triplets[idx];
        std::string target = t.video_id;
        while (target == t.video_id) {
            target = video_pool[static_cast<size_t>(rng.uniform_int(static_cast<int>(video_pool.size())))];
        }
        t.video_id = target;
        report.corrupted_ids.push_back(t.id);
    }
    std::sort(report.corrupted_ids.begin(), report.corrupted_ids.end());
    return report;
}

void save_noise_report(const NoiseReport& r, const std::filesystem::path& path) {
    json j;
    j["fraction"] = r.fraction;
    j["seed"] = r.seed;
    j["corrupted_ids"] = r.corrupted_ids;
    std::ofstream os(path);
    if (!os) throw IoError("cannot write noise report " + path.string());
    os << j.dump(2) << '\n';
}

NoiseReport load_noise_report(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open noise report " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed noise report: ") + e.what());
    }
    NoiseReport r;
    r.fraction = j.at("fraction").get<double>();
    r.seed = j.at("seed").get<uint64_t>();
    r.corrupted_ids = j.at("corrupted_ids").get<std::vector<int>>();
    std::sort(r.corrupted_ids.begin(), r.corrupted_ids.end());
    return r;
}

namespace {

constexpr char kFeatureMagic[4] = {'V', 'Q', 'A', 'F'};
constexpr uint32_t kFeatureVersion = 1;

void write_features_binary(const VideoFeatures& v, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write feature file " + path.string());
    os.write(kFeatureMagic, 4);
    uint32_t fields[3] = {kFeatureVersion, static_cast<uint32_t>(v.clip_count()),
                          static_cast<uint32_t>(v.feature_dim())};
    os.write(reinterpret_cast<const char*>(fields), sizeof(fields));
    os.write(reinterpret_cast<const char*>(v.clips.data.data()),
             static_cast<std::streamsize>(v.clips.data.size() * sizeof(double)));
    if (!os) throw IoError("failed writing feature file " + path.string());
}

Tensor read_features_binary(const std::filesystem::path& path, const std::string& video_id) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("missing feature file for video '" + video_id + "': " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kFeatureMagic, 4) != 0) {
        throw DataError("feature file for video '" + video_id + "' has bad magic");
    }
    uint32_t fields[3];
    if (!is.read(reinterpret_cast<char*>(fields), sizeof(fields))) {
        throw DataError("feature file for video '" + video_id + "' is truncated");
    }
    if (fields[0] != kFeatureVersion) {
        throw DataError("feature file for video '" + video_id + "' has unsupported version " +
                        std::to_string(fields[0]));
    }
    uint32_t clips = fields[1], dim = fields[2];
    if (clips == 0 || dim == 0) {
        throw DataError("feature file for video '" + video_id + "' declares empty shape");
    }
    std::vector<double> data(static_cast<size_t>(clips) * dim);
    if (!is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(double)))) {
        throw DataError("feature file for video '" + video_id + "' is truncated");
    }
    return Tensor({static_cast<int>(clips), static_cast<int>(dim)}, std::move(data));
}

Tensor read_features_csv(const std::filesystem::path& path, const std::string& video_id) {
    std::ifstream is(path);
    if (!is) throw DataError("missing feature file for video '" + video_id + "': " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("feature CSV for video '" + video_id + "': bad value '" + cell + "'");
            }
        }
        if (!rows.empty() && rows.back().size() != row.size()) {
            throw DataError("feature CSV for video '" + video_id + "': ragged rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("feature CSV for video '" + video_id + "' is empty");
    int clips = static_cast<int>(rows.size());
    int dim = static_cast<int>(rows[0].size());
    Tensor t = Tensor::zeros({clips, dim});
    for (int i = 0; i < clips; ++i) {
        for (int j = 0; j < dim; ++j) t.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return t;
}

json triplet_to_json(const Triplet& t) {
    json j;
    j["id"] = t.id;
    j["video_id"] = t.video_id;
    j["question"] = t.question_raw;
    j["answer"] = t.answer_raw;
    j["qa_source"] = to_string(t.qa_source);
    j["split"] = to_string(t.split);
    return j;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "features");
    json manifest;
    manifest["feature_dim"] = ds.feature_dim;
    manifest["qa_file"] = "qa.jsonl";
    manifest["features_dir"] = "features";
    {
        std::ofstream os(dir / "manifest.json");
        if (!os) throw IoError("cannot write manifest in " + dir.string());
        os << manifest.dump(2) << '\n';
    }
    {
        std::ofstream os(dir / "qa.jsonl");
        if (!os) throw IoError("cannot write qa.jsonl in " + dir.string());
        for (const auto& t : ds.triplets) os << triplet_to_json(t).dump() << '\n';
    }
    for (const auto& v : ds.videos) {
        write_features_binary(v, dir / "features" / (v.video_id + ".vqaf"));
    }
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
    namespace fs = std::filesystem;
    fs::path manifest_file = manifest_path;
    if (fs::is_directory(manifest_file)) manifest_file /= "manifest.json";
    std::ifstream is(manifest_file);
    if (!is) throw DataError("cannot open manifest " + manifest_file.string());
    json manifest;
    try {
        is >> manifest;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed manifest JSON: ") + e.what());
    }

    Dataset ds;
    ds.feature_dim = manifest.at("feature_dim").get<int>();
    if (ds.feature_dim <= 0) throw DataError("manifest declares non-positive feature_dim");
    fs::path base = manifest_file.parent_path();
    fs::path qa_path = base / manifest.at("qa_file").get<std::string>();
    fs::path features_dir = base / manifest.at("features_dir").get<std::string>();

    std::ifstream qa(qa_path);
    if (!qa) throw DataError("cannot open QA file " + qa_path.string());
    std::string line;
    int line_no = 0;
    std::set<int> seen_ids;
    while (std::getline(qa, line)) {
        ++line_no;
        if (line.empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError("QA file " + qa_path.string() + " line " + std::to_string(line_no) +
                            ": malformed JSON: " + e.what());
        }
        Triplet t;
        try {
            t.id = row.at("id").get<int>();
            t.video_id = row.at("video_id").get<std::string>();
            t.question_raw = row.at("question").get<std::string>();
            t.answer_raw = row.at("answer").get<std::string>();
            t.qa_source = qa_source_from_string(row.at("qa_source").get<std::string>());
            t.split = split_from_string(row.at("split").get<std::string>());
        } catch (const json::exception& e) {
            throw DataError("QA file line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("QA file line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen_ids.insert(t.id).second) {
            throw DataError("QA file line " + std::to_string(line_no) + ": duplicate triplet id " +
                            std::to_string(t.id));
        }
        try {
            t.question = preprocess_question(t.question_raw);
        } catch (const DataError& e) {
            throw DataError("QA file line " + std::to_string(line_no) + ": " + e.what());
        }
        t.answer = preprocess_answer(t.answer_raw);
        if (t.answer.empty()) {
            throw DataError("QA file line " + std::to_string(line_no) + ": answer empty after cleaning");
        }
        t.answer_text = join_tokens(t.answer);
        ds.triplets.push_back(std::move(t));
    }

    std::set<std::string> video_ids;
    for (const auto& t : ds.triplets) video_ids.insert(t.video_id);
    for (const auto& vid : video_ids) {
        VideoFeatures v;
        v.video_id = vid;
        fs::path bin = features_dir / (vid + ".vqaf");
        fs::path csv = features_dir / (vid + ".csv");
        if (fs::exists(bin)) {
            v.clips = read_features_binary(bin, vid);
        } else if (fs::exists(csv)) {
            v.clips = read_features_csv(csv, vid);
        } else {
            throw DataError("missing feature file for video '" + vid + "' in " + features_dir.string());
        }
        if (v.clips.dim(1) != ds.feature_dim) {
            throw DataError("video '" + vid + "': feature dim " + std::to_string(v.clips.dim(1)) +
                            " does not match manifest feature_dim " + std::to_string(ds.feature_dim));
        }
        v.source = v.clips.all_zero() ? VideoFeatures::Source::Dummy : VideoFeatures::Source::Ingested;
        ds.videos.push_back(std::move(v));
    }
    ds.rebuild_video_index();
    ds.check_split_integrity();
    return ds;
}

uint64_t corpus_hash(const Dataset& ds) {
    uint64_t h = fnv1a(&ds.feature_dim, sizeof(ds.feature_dim));
    for (const auto& v : ds.videos) {
        h = fnv1a(v.video_id.data(), v.video_id.size(), h);
        h = fnv1a(v.clips.shape.data(), v.clips.shape.size() * sizeof(int), h);
        h = fnv1a(v.clips.data.data(), v.clips.data.size() * sizeof(double), h);
    }
    for (const auto& t : ds.triplets) {
        std::string row = triplet_to_json(t).dump();
        h = fnv1a(row.data(), row.size(), h);
    }
    return h;
}

}  // namespace videoqa
