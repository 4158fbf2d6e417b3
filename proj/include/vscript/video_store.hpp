#pragma once

// Video database: annotation ingestion, speaker-frame filtering, the persisted
// caption-embedding index, metadata-filtered cosine retrieval, and genre-keyed
// background music.
//
// On-disk index layout (a directory):
//   manifest.jsonl  one ClipRecord per line, embeddings excluded
//   vectors.vsdb    "VSDB" | u8 version=1 | u32le dim | u32le rows | rows*dim f32le

#include "vscript/backend.hpp"
#include "vscript/domain.hpp"
#include "vscript/json_io.hpp"
#include "vscript/scene_gen.hpp"
#include "vscript/segment.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace vscript {

enum class Gender { M, F, U };

inline std::string_view to_string(Gender g) {
    switch (g) {
    case Gender::M: return "M";
    case Gender::F: return "F";
    case Gender::U: return "U";
    }
    return "U";
}

inline void to_json(json& j, Gender g) { j = std::string(to_string(g)); }
inline void from_json(const json& j, Gender& g) {
    auto s = j.get<std::string>();
    if (s == "M") g = Gender::M;
    else if (s == "F") g = Gender::F;
    else if (s == "U") g = Gender::U;
    else throw Error(ErrorCode::InvalidArgument, "unknown gender '" + s + "'");
}

struct FaceBox {
    double center_x = 0.5;
    double center_y = 0.5;
    double area_fraction = 0.0;
    Gender gender = Gender::U;

    bool operator==(const FaceBox&) const = default;
};

inline constexpr std::size_t kMaxFacesPerFrame = 32;

struct FrameAnnotation {
    std::int64_t second = 0;
    std::vector<FaceBox> faces;
    std::string location_label;
    TimeOfDay time_of_day = TimeOfDay::Unknown;

    bool operator==(const FrameAnnotation&) const = default;
};

inline void to_json(json& j, const FaceBox& f) {
    j = json{{"center_x", f.center_x}, {"center_y", f.center_y}, {"area_fraction", f.area_fraction},
             {"gender", f.gender}};
}
inline void from_json(const json& j, FaceBox& f) {
    j.at("center_x").get_to(f.center_x);
    j.at("center_y").get_to(f.center_y);
    j.at("area_fraction").get_to(f.area_fraction);
    f.gender = j.contains("gender") ? j.at("gender").get<Gender>() : Gender::U;
}

inline void to_json(json& j, const FrameAnnotation& a) {
    j = json{{"second", a.second}, {"faces", a.faces}, {"location_label", a.location_label},
             {"time_of_day", a.time_of_day}};
}
inline void from_json(const json& j, FrameAnnotation& a) {
    j.at("second").get_to(a.second);
    a.faces = j.value("faces", std::vector<FaceBox>{});
    a.location_label = j.value("location_label", std::string{});
    a.time_of_day = j.contains("time_of_day") ? j.at("time_of_day").get<TimeOfDay>() : TimeOfDay::Unknown;
}

inline void validate(const FrameAnnotation& a) {
    if (a.second < 0) throw Error(ErrorCode::InvalidArgument, "negative annotation second");
    if (a.faces.size() > kMaxFacesPerFrame)
        throw Error(ErrorCode::InvalidArgument, "more than 32 faces at second " + std::to_string(a.second));
    for (const auto& f : a.faces) {
        bool ok = f.center_x >= 0.0 && f.center_x <= 1.0 && f.center_y >= 0.0 && f.center_y <= 1.0 &&
                  f.area_fraction > 0.0 && f.area_fraction <= 1.0;
        if (!ok) throw Error(ErrorCode::InvalidArgument, "face box out of range at second " + std::to_string(a.second));
    }
}

// ---------------------------------------------------------------------------
// Speaker-frame filtering
// ---------------------------------------------------------------------------

/// A talking head: exactly one face, centred within 0.2 of the frame centre on
/// both axes, covering 5%..50% of the frame, held for at least three seconds
/// with its centre drifting no more than 0.05.
struct SpeakerRule {
    double center_box = 0.2;
    double min_area = 0.05;
    double max_area = 0.5;
    std::size_t min_run = 3;
    double max_drift = 0.05;
};

/// Half-open range of whole seconds.
struct TimeRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;

    [[nodiscard]] std::int64_t length() const { return end - begin; }
    bool operator==(const TimeRange&) const = default;
};

namespace detail {

inline constexpr double kBoundaryEps = 1e-9;

inline bool speaker_like(const FrameAnnotation& a, const SpeakerRule& rule) {
    if (a.faces.size() != 1) return false;
    const auto& f = a.faces.front();
    return std::abs(f.center_x - 0.5) <= rule.center_box + kBoundaryEps &&
           std::abs(f.center_y - 0.5) <= rule.center_box + kBoundaryEps &&
           f.area_fraction >= rule.min_area - kBoundaryEps && f.area_fraction <= rule.max_area + kBoundaryEps;
}

inline double center_distance(const FaceBox& a, const FaceBox& b) {
    return std::hypot(a.center_x - b.center_x, a.center_y - b.center_y);
}

} // namespace detail

/// Marks seconds that belong to a stationary talking-head run.
inline std::vector<bool> speaker_second_mask(const std::vector<FrameAnnotation>& annotations,
                                             const SpeakerRule& rule = {}) {
    const auto n = annotations.size();
    for (std::size_t i = 1; i < n; ++i)
        if (annotations[i].second <= annotations[i - 1].second)
            throw Error(ErrorCode::InvalidArgument, "annotations must be sorted by second without duplicates");

    std::vector<bool> deleted(n, false);
    std::size_t a = 0;
    while (a < n) {
        if (!detail::speaker_like(annotations[a], rule)) {
            ++a;
            continue;
        }
        std::size_t b = a + 1;
        while (b < n && detail::speaker_like(annotations[b], rule) &&
               annotations[b].second == annotations[b - 1].second + 1)
            ++b;

        // Two pointers over the run [a, b): for each start, the longest window
        // whose centres stay within max_drift of one another.
        std::size_t end = a;
        for (std::size_t start = a; start < b; ++start) {
            if (end < start) end = start;
            while (end < b) {
                bool fits = true;
                for (std::size_t k = start; k < end && fits; ++k)
                    fits = detail::center_distance(annotations[k].faces.front(), annotations[end].faces.front()) <=
                           rule.max_drift + detail::kBoundaryEps;
                if (!fits) break;
                ++end;
            }
            if (end - start >= rule.min_run)
                for (std::size_t k = start; k < end; ++k) deleted[k] = true;
        }
        a = b;
    }
    return deleted;
}

/// Seconds left after removing talking-head runs, merged into maximal ranges.
/// Gaps in the annotation timeline also split ranges.
inline std::vector<TimeRange> filter_speaker_segments(const std::vector<FrameAnnotation>& annotations,
                                                      const SpeakerRule& rule = {}) {
    auto deleted = speaker_second_mask(annotations, rule);
    std::vector<TimeRange> kept;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        if (deleted[i]) continue;
        auto s = annotations[i].second;
        if (!kept.empty() && kept.back().end == s)
            kept.back().end = s + 1;
        else
            kept.push_back(TimeRange{s, s + 1});
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Clip records
// ---------------------------------------------------------------------------

struct ClipRecord {
    std::string id;
    std::string video_uri;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string caption;
    std::optional<Genre> genre_tag;
    std::string location;
    TimeOfDay time_of_day = TimeOfDay::Unknown;
    std::size_t char_count = 0;
    std::vector<Gender> genders; // sorted multiset
    std::size_t embedding_row = 0;

    bool operator==(const ClipRecord&) const = default;
};

inline void to_json(json& j, const ClipRecord& c) {
    j = json{{"id", c.id},
             {"video_uri", c.video_uri},
             {"start_s", c.start_s},
             {"end_s", c.end_s},
             {"caption", c.caption},
             {"genre_tag", c.genre_tag ? json(*c.genre_tag) : json(nullptr)},
             {"location", c.location},
             {"time_of_day", c.time_of_day},
             {"char_count", c.char_count},
             {"genders", c.genders},
             {"embedding_row", c.embedding_row}};
}
inline void from_json(const json& j, ClipRecord& c) {
    j.at("id").get_to(c.id);
    j.at("video_uri").get_to(c.video_uri);
    j.at("start_s").get_to(c.start_s);
    j.at("end_s").get_to(c.end_s);
    j.at("caption").get_to(c.caption);
    const auto& g = j.at("genre_tag");
    c.genre_tag = g.is_null() ? std::nullopt : std::optional<Genre>(g.get<Genre>());
    j.at("location").get_to(c.location);
    j.at("time_of_day").get_to(c.time_of_day);
    j.at("char_count").get_to(c.char_count);
    j.at("genders").get_to(c.genders);
    j.at("embedding_row").get_to(c.embedding_row);
}

/// A captioned segment before metadata tagging and embedding.
struct ClipDraft {
    std::string id;
    std::string video_uri;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string caption;
};

inline constexpr double kMaxSpeakerFraction = 0.8;
inline constexpr double kGenreTagThreshold = 0.5;

namespace detail {

template <class Key>
std::vector<std::pair<Key, std::size_t>> ranked_counts(const std::map<Key, std::size_t>& counts) {
    std::vector<std::pair<Key, std::size_t>> v(counts.begin(), counts.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return v;
}

} // namespace detail

/// Tags a caption segment from the per-second annotations of its video and
/// rejects it when talking heads cover more than 80% of it or the caption is
/// empty or banned.
inline ClipRecord ingest_clip(const ClipDraft& draft, const std::vector<FrameAnnotation>& annotations,
                              GenreClassifier& classifier, const BanList& banlist,
                              const SpeakerRule& rule = {}) {
    if (text::trim_view(draft.caption).empty()) throw Error(ErrorCode::RejectedClip, "empty_caption");
    double duration = draft.end_s - draft.start_s;
    if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "clip duration must be positive: " + draft.id);
    if (contains_banned(draft.caption, banlist)) throw Error(ErrorCode::RejectedClip, "banned_caption");

    std::vector<FrameAnnotation> inside;
    for (const auto& a : annotations) {
        auto s = static_cast<double>(a.second);
        if (s >= draft.start_s && s < draft.end_s) inside.push_back(a);
    }
    auto deleted = speaker_second_mask(inside, rule);
    auto deleted_seconds = static_cast<double>(std::count(deleted.begin(), deleted.end(), true));
    if (deleted_seconds / duration > kMaxSpeakerFraction) throw Error(ErrorCode::RejectedClip, "speaker_dominated");

    ClipRecord rec;
    rec.id = draft.id;
    rec.video_uri = draft.video_uri;
    rec.start_s = draft.start_s;
    rec.end_s = draft.end_s;
    rec.caption = text::normalize_whitespace(draft.caption);

    // Cast: most frequent gender multiset, preferring smaller casts on ties.
    std::map<std::vector<Gender>, std::size_t> casts;
    std::map<TimeOfDay, std::size_t> times;
    std::map<std::string, std::size_t> places;
    for (const auto& a : inside) {
        std::vector<Gender> g;
        for (const auto& f : a.faces) g.push_back(f.gender);
        std::sort(g.begin(), g.end());
        ++casts[g];
        ++times[a.time_of_day];
        if (!text::trim_view(a.location_label).empty()) ++places[text::trim(a.location_label)];
    }
    if (!casts.empty()) {
        std::vector<std::pair<std::vector<Gender>, std::size_t>> v(casts.begin(), casts.end());
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first.size() < b.first.size();
        });
        rec.genders = v.front().first;
        rec.char_count = rec.genders.size();
    }
    if (!times.empty()) {
        auto ranked = detail::ranked_counts(times);
        bool tie = ranked.size() > 1 && ranked[1].second == ranked[0].second;
        rec.time_of_day = tie ? TimeOfDay::Unknown : ranked.front().first;
    }
    if (!places.empty()) rec.location = detail::ranked_counts(places).front().first;

    auto dist = classifier.classify_genre(rec.caption);
    auto top = dist.argmax();
    if (dist[top] >= kGenreTagThreshold) rec.genre_tag = top;
    return rec;
}

// ---------------------------------------------------------------------------
// Index
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kIndexVersion = 1;
inline constexpr std::array<char, 4> kIndexMagic{'V', 'S', 'D', 'B'};
inline constexpr double kRowNormTolerance = 1e-5;

struct VideoIndex {
    std::size_t dim = 0;
    std::vector<float> rows; // row-major, clips.size() x dim
    std::vector<ClipRecord> clips;
    std::uint32_t version = kIndexVersion;

    [[nodiscard]] std::size_t size() const { return clips.size(); }
    [[nodiscard]] bool empty() const { return clips.empty(); }
    [[nodiscard]] std::span<const float> row(std::size_t i) const {
        return std::span<const float>(rows).subspan(i * dim, dim);
    }

    bool operator==(const VideoIndex&) const = default;
};

inline VideoIndex build_index(std::vector<ClipRecord> clips, Embedder& embedder, std::size_t batch = 256) {
    std::set<std::string> ids;
    for (const auto& c : clips) {
        if (text::trim_view(c.caption).empty()) throw Error(ErrorCode::InvalidArgument, "empty caption: " + c.id);
        if (!ids.insert(c.id).second) throw Error(ErrorCode::DuplicateClipId, c.id);
    }

    VideoIndex index;
    if (clips.empty()) {
        index.dim = embedder.embed_texts({"probe"}).front().dim();
        return index;
    }
    for (std::size_t b = 0; b < clips.size(); b += batch) {
        std::vector<std::string> captions;
        for (std::size_t i = b; i < std::min(clips.size(), b + batch); ++i) captions.push_back(clips[i].caption);
        auto embeddings = embedder.embed_texts(captions);
        for (std::size_t k = 0; k < embeddings.size(); ++k) {
            const auto& e = embeddings[k];
            auto i = b + k;
            if (index.dim == 0) index.dim = e.dim();
            if (e.dim() != index.dim) throw Error(ErrorCode::BackendMalformedReply, "embedding dimension changed");
            if (e.zero_sentinel)
                throw Error(ErrorCode::InvalidArgument, "caption has no embeddable tokens: " + clips[i].id);
            index.rows.insert(index.rows.end(), e.values.begin(), e.values.end());
            clips[i].embedding_row = i;
        }
    }
    index.clips = std::move(clips);
    return index;
}

namespace detail {

inline void put_u32le(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
}

inline std::uint32_t get_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::filesystem::path manifest_path(const std::filesystem::path& dir) { return dir / "manifest.jsonl"; }
inline std::filesystem::path matrix_path(const std::filesystem::path& dir) { return dir / "vectors.vsdb"; }

} // namespace detail

inline void save_index(const VideoIndex& index, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream m(detail::manifest_path(dir), std::ios::binary | std::ios::trunc);
        if (!m) throw Error(ErrorCode::InvalidArgument, "cannot write " + detail::manifest_path(dir).string());
        for (const auto& c : index.clips) m << json(c).dump() << '\n';
    }
    std::ofstream out(detail::matrix_path(dir), std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + detail::matrix_path(dir).string());
    out.write(kIndexMagic.data(), 4);
    out.put(static_cast<char>(kIndexVersion));
    detail::put_u32le(out, static_cast<std::uint32_t>(index.dim));
    detail::put_u32le(out, static_cast<std::uint32_t>(index.clips.size()));
    for (float f : index.rows) detail::put_u32le(out, std::bit_cast<std::uint32_t>(f));
    if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + detail::matrix_path(dir).string());
}

/// Loads and verifies an index. Any inconsistency raises CorruptIndex with one
/// of: missing_file, bad_magic, unsupported_version, row_count_mismatch,
/// dim_mismatch, bad_norm, bad_manifest.
inline VideoIndex load_index(const std::filesystem::path& dir) {
    auto corrupt = [](const char* kind) { return Error(ErrorCode::CorruptIndex, kind); };

    std::ifstream in(detail::matrix_path(dir), std::ios::binary);
    std::ifstream m(detail::manifest_path(dir), std::ios::binary);
    if (!in || !m) throw corrupt("missing_file");

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 13) throw corrupt(bytes.size() >= 4 && std::equal(kIndexMagic.begin(), kIndexMagic.end(), bytes.begin()) ? "row_count_mismatch" : "bad_magic");
    if (!std::equal(kIndexMagic.begin(), kIndexMagic.end(), bytes.begin())) throw corrupt("bad_magic");
    if (bytes[4] != kIndexVersion) throw corrupt("unsupported_version");

    VideoIndex index;
    index.version = bytes[4];
    index.dim = detail::get_u32le(bytes.data() + 5);
    std::size_t rows = detail::get_u32le(bytes.data() + 9);
    if (bytes.size() - 13 != rows * index.dim * 4) throw corrupt("row_count_mismatch");
    if (rows > 0 && index.dim == 0) throw corrupt("dim_mismatch");

    index.rows.resize(rows * index.dim);
    for (std::size_t i = 0; i < index.rows.size(); ++i)
        index.rows[i] = std::bit_cast<float>(detail::get_u32le(bytes.data() + 13 + 4 * i));

    std::string line;
    while (std::getline(m, line)) {
        if (text::trim_view(line).empty()) continue;
        try {
            index.clips.push_back(json::parse(line).get<ClipRecord>());
        } catch (const std::exception&) {
            throw corrupt("bad_manifest");
        }
    }
    if (index.clips.size() != rows) throw corrupt("row_count_mismatch");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < rows; ++i) {
        if (index.clips[i].embedding_row != i || !ids.insert(index.clips[i].id).second) throw corrupt("bad_manifest");
        if (std::abs(l2_norm(index.row(i)) - 1.0) > kRowNormTolerance) throw corrupt("bad_norm");
    }
    return index;
}

// ---------------------------------------------------------------------------
// Retrieval
// ---------------------------------------------------------------------------

struct RetrievalConstraints {
    std::optional<Genre> genre;
    std::optional<TimeOfDay> time_of_day;
    std::optional<std::size_t> min_char_count;
    std::optional<std::vector<Gender>> required_genders;
};

struct RetrievalHit {
    ClipRecord clip;
    double score = 0.0;

    bool operator==(const RetrievalHit&) const = default;
};

struct RetrievalResult {
    std::vector<RetrievalHit> hits;
    bool relaxed = false;
    std::vector<std::string> relaxed_filters;
};

enum class ClipFilter { Genre, Time, CharCount, Genders };

inline std::string_view to_string(ClipFilter f) {
    switch (f) {
    case ClipFilter::Genre: return "genre";
    case ClipFilter::Time: return "time_of_day";
    case ClipFilter::CharCount: return "char_count";
    case ClipFilter::Genders: return "genders";
    }
    return "unknown";
}

inline bool genders_subset(const std::vector<Gender>& required, const std::vector<Gender>& have) {
    std::array<std::size_t, 3> need{};
    std::array<std::size_t, 3> got{};
    for (auto g : required) ++need[static_cast<std::size_t>(g)];
    for (auto g : have) ++got[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < 3; ++i)
        if (need[i] > got[i]) return false;
    return true;
}

/// Whether `clip` passes `filter` under `c`. An unset constraint always passes;
/// the time filter only applies when both sides know the time of day.
inline bool passes(const ClipRecord& clip, const RetrievalConstraints& c, ClipFilter filter) {
    switch (filter) {
    case ClipFilter::Genre:
        return !c.genre || *c.genre == Genre::GenreFree || clip.genre_tag == c.genre;
    case ClipFilter::Time:
        return !c.time_of_day || *c.time_of_day == TimeOfDay::Unknown ||
               clip.time_of_day == TimeOfDay::Unknown || clip.time_of_day == *c.time_of_day;
    case ClipFilter::CharCount:
        return !c.min_char_count || clip.char_count >= *c.min_char_count;
    case ClipFilter::Genders:
        return !c.required_genders || genders_subset(*c.required_genders, clip.genders);
    }
    return true;
}

inline constexpr std::array<ClipFilter, 4> kFilterOrder{ClipFilter::Genre, ClipFilter::Time,
                                                        ClipFilter::CharCount, ClipFilter::Genders};

/// Ranks clips by cosine similarity to an already-embedded query after hard
/// metadata filters. When nothing survives, filters are dropped one at a time
/// (genders, then char count, then time, then genre) and the result is marked
/// relaxed. Ties in score are broken by clip id.
inline RetrievalResult retrieve_by_embedding(const Embedding& query, const VideoIndex& index,
                                             const RetrievalConstraints& constraints) {
    if (index.empty()) throw Error(ErrorCode::EmptyIndex, "video index has no clips");
    if (query.dim() != index.dim) throw Error(ErrorCode::InvalidArgument, "query dimension mismatch");

    std::vector<ClipFilter> active(kFilterOrder.begin(), kFilterOrder.end());
    RetrievalResult result;
    while (true) {
        for (std::size_t i = 0; i < index.size(); ++i) {
            const auto& clip = index.clips[i];
            bool ok = std::all_of(active.begin(), active.end(), [&](ClipFilter f) { return passes(clip, constraints, f); });
            if (ok) result.hits.push_back(RetrievalHit{clip, cosine(query.values, index.row(i))});
        }
        if (!result.hits.empty() || active.empty()) break;
        result.relaxed = true;
        result.relaxed_filters.emplace_back(to_string(active.back()));
        active.pop_back();
    }
    std::sort(result.hits.begin(), result.hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.clip.id < b.clip.id;
    });
    return result;
}

inline RetrievalResult retrieve_clip(const std::string& query_text, const VideoIndex& index,
                                     const RetrievalConstraints& constraints, Embedder& embedder) {
    if (index.empty()) throw Error(ErrorCode::EmptyIndex, "video index has no clips");
    auto query = embedder.embed_texts({query_text}).front();
    return retrieve_by_embedding(query, index, constraints);
}

inline RetrievalResult retrieve_clip(const PlotSentence& query, const VideoIndex& index,
                                     const RetrievalConstraints& constraints, Embedder& embedder) {
    return retrieve_clip(query.text, index, constraints, embedder);
}

// ---------------------------------------------------------------------------
// Database construction from annotation/caption directories
// ---------------------------------------------------------------------------

struct RejectedClipEntry {
    std::string id;
    std::string reason;
};

struct DatabaseBuild {
    VideoIndex index;
    std::vector<RejectedClipEntry> rejected;
};

template <class T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim_view(line).empty()) continue;
        try {
            out.push_back(json::parse(line).get<T>());
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

/// One caption cue from `<captions>/<video>.jsonl`.
struct CaptionCue {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
    std::string video_uri;
};

inline void from_json(const json& j, CaptionCue& c) {
    j.at("start_s").get_to(c.start_s);
    j.at("end_s").get_to(c.end_s);
    j.at("text").get_to(c.text);
    c.video_uri = j.value("video_uri", std::string{});
}

/// Splits each cue into caption sentences, dividing its time span in
/// proportion to sentence token counts.
inline std::vector<ClipDraft> drafts_from_cues(const std::string& video, const std::vector<CaptionCue>& cues) {
    std::vector<ClipDraft> out;
    for (const auto& cue : cues) {
        auto sentences = segment_caption(cue.text);
        std::size_t total = 0;
        for (const auto& s : sentences) total += text::split_whitespace(s).size();
        double t = cue.start_s;
        for (const auto& s : sentences) {
            double share = total == 0 ? 0.0 : static_cast<double>(text::split_whitespace(s).size()) / total;
            double end = (&s == &sentences.back()) ? cue.end_s : t + share * (cue.end_s - cue.start_s);
            out.push_back(ClipDraft{video + "#" + std::to_string(out.size()),
                                    cue.video_uri.empty() ? video : cue.video_uri, t, end, s});
            t = end;
        }
    }
    return out;
}

inline DatabaseBuild build_database(const std::filesystem::path& annotations_dir,
                                    const std::filesystem::path& captions_dir, GenreClassifier& classifier,
                                    Embedder& embedder, const BanList& banlist) {
    std::vector<std::filesystem::path> caption_files;
    for (const auto& e : std::filesystem::directory_iterator(captions_dir))
        if (e.path().extension() == ".jsonl") caption_files.push_back(e.path());
    std::sort(caption_files.begin(), caption_files.end());

    DatabaseBuild build;
    std::vector<ClipRecord> records;
    for (const auto& file : caption_files) {
        auto video = file.stem().string();
        auto cues = read_jsonl<CaptionCue>(file);
        std::vector<FrameAnnotation> annotations;
        auto ann_file = annotations_dir / (video + ".jsonl");
        if (std::filesystem::exists(ann_file)) annotations = read_jsonl<FrameAnnotation>(ann_file);
        std::sort(annotations.begin(), annotations.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        for (const auto& a : annotations) validate(a);

        for (const auto& draft : drafts_from_cues(video, cues)) {
            try {
                records.push_back(ingest_clip(draft, annotations, classifier, banlist));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::RejectedClip) throw;
                build.rejected.push_back(RejectedClipEntry{draft.id, e.detail()});
            }
        }
    }
    build.index = build_index(std::move(records), embedder);
    return build;
}

// ---------------------------------------------------------------------------
// Background music
// ---------------------------------------------------------------------------

struct MusicTrack {
    std::string uri;
    std::string mood_tag;

    bool operator==(const MusicTrack&) const = default;
};

inline void to_json(json& j, const MusicTrack& t) { j = json{{"uri", t.uri}, {"mood_tag", t.mood_tag}}; }
inline void from_json(const json& j, MusicTrack& t) {
    j.at("uri").get_to(t.uri);
    j.at("mood_tag").get_to(t.mood_tag);
}

/// Genre -> track map plus an optional fallback used for GenreFree and for any
/// genre without its own entry.
struct MusicConfig {
    std::map<Genre, MusicTrack> tracks;
    std::optional<MusicTrack> default_track;
};

inline MusicConfig default_music_config() {
    MusicConfig c;
    c.tracks[Genre::Crime] = {"music/crime_pulse.mp3", "intense"};
    c.tracks[Genre::SciFi] = {"music/scifi_drift.mp3", "mysterious"};
    c.tracks[Genre::War] = {"music/war_drums.mp3", "epic"};
    c.tracks[Genre::Romance] = {"music/romance_strings.mp3", "soothing"};
    c.default_track = MusicTrack{"music/neutral_piano.mp3", "neutral"};
    return c;
}

/// `{"Crime": {"uri", "mood_tag"}, ..., "default": {...}}`
inline MusicConfig parse_music_config(const json& j) {
    MusicConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "default") {
            c.default_track = value.get<MusicTrack>();
            continue;
        }
        c.tracks[genre_from_string(key)] = value.get<MusicTrack>();
    }
    return c;
}

inline MusicConfig load_music_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read music config " + path.string());
    try {
        return parse_music_config(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
}

inline MusicTrack select_music(Genre genre, const MusicConfig& config) {
    if (auto it = config.tracks.find(genre); it != config.tracks.end()) return it->second;
    if (config.default_track) return *config.default_track;
    throw Error(ErrorCode::MissingMusicEntry, std::string(to_string(genre)));
}

} // namespace vscript
