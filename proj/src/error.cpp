#include "wavescope/error.hpp"

namespace wavescope {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::IoError: return "IoError";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::UnsupportedDtype: return "UnsupportedDtype";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::ManifestParse: return "ManifestParse";
    case Errc::ManifestMismatch: return "ManifestMismatch";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::NonFiniteWeight: return "NonFiniteWeight";
    case Errc::RowSumViolation: return "RowSumViolation";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::TooShort: return "TooShort";
    case Errc::TooManyLevels: return "TooManyLevels";
    case Errc::ZeroSpectrum: return "ZeroSpectrum";
    case Errc::UnknownWavelet: return "UnknownWavelet";
    case Errc::IncompatibleBank: return "IncompatibleBank";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooShortAfterScaling: return "TooShortAfterScaling";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::OddHeadDim: return "OddHeadDim";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::BadBandwidth: return "BadBandwidth";
    case Errc::AllFlagged: return "AllFlagged";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_io_error(Errc code) noexcept {
  switch (code) {
    case Errc::IoError:
    case Errc::BadMagic:
    case Errc::UnsupportedVersion:
    case Errc::UnsupportedDtype:
    case Errc::UnsupportedOrder:
    case Errc::ShapeMismatch:
    case Errc::MalformedHeader:
    case Errc::ManifestParse:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace wavescope
