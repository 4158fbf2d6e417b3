#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vscript {

enum class ErrorCode {
    InvalidArgument,
    // backends
    BackendUnavailable,
    BackendMalformedReply,
    EmptyText,
    // plot generation
    EmptyStartingWords,
    AllCandidatesEmpty,
    NoScorableCandidate,
    NoSentences,
    // dialogue
    DialogueParseError,
    MalformedRecord,
    // scenes
    CardinalityMismatch,
    // video store
    RejectedClip,
    DuplicateClipId,
    CorruptIndex,
    EmptyIndex,
    MissingMusicEntry,
    // metrics
    NoNgrams,
    EmptySequence,
    LengthMismatch,
    EmptyCandidate,
    // sessions
    UnknownSession,
    InvalidSteer,
    CorruptSessionRecord,
    StageFailed,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BackendMalformedReply: return "BackendMalformedReply";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmptyStartingWords: return "EmptyStartingWords";
    case ErrorCode::AllCandidatesEmpty: return "AllCandidatesEmpty";
    case ErrorCode::NoScorableCandidate: return "NoScorableCandidate";
    case ErrorCode::NoSentences: return "NoSentences";
    case ErrorCode::DialogueParseError: return "DialogueParseError";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::RejectedClip: return "RejectedClip";
    case ErrorCode::DuplicateClipId: return "DuplicateClipId";
    case ErrorCode::CorruptIndex: return "CorruptIndex";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::MissingMusicEntry: return "MissingMusicEntry";
    case ErrorCode::NoNgrams: return "NoNgrams";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyCandidate: return "EmptyCandidate";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::InvalidSteer: return "InvalidSteer";
    case ErrorCode::CorruptSessionRecord: return "CorruptSessionRecord";
    case ErrorCode::StageFailed: return "StageFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library. `detail()` carries the machine-readable
/// qualifier (a rejection reason, a corruption kind, or a raw backend payload).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(format(code, detail, index)), code_(code), detail_(std::move(detail)),
          index_(index) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }
    [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

private:
    static std::string format(ErrorCode code, const std::string& detail,
                              std::optional<std::size_t> index) {
        std::string msg{to_string(code)};
        if (index) msg += " at index " + std::to_string(*index);
        if (!detail.empty()) msg += ": " + detail;
        return msg;
    }

    ErrorCode code_;
    std::string detail_;
    std::optional<std::size_t> index_;
};

} // namespace vscript
