#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavescope {

enum class Errc {
  // ingestion / parse
  IoError,
  BadMagic,
  UnsupportedVersion,
  UnsupportedDtype,
  UnsupportedOrder,
  ShapeMismatch,
  MalformedHeader,
  ManifestParse,
  // validation
  ManifestMismatch,
  NegativeWeight,
  NonFiniteWeight,
  RowSumViolation,
  IndexOutOfRange,
  NotNormalized,
  // numerics
  TooShort,
  TooManyLevels,
  ZeroSpectrum,
  UnknownWavelet,
  IncompatibleBank,
  DimensionMismatch,
  InsufficientSamples,
  EmptyInput,
  TooShortAfterScaling,
  WindowTooLarge,
  OddHeadDim,
  InvalidSpec,
  BadBandwidth,
  AllFlagged,
  InvalidConfig,
};

std::string_view errc_name(Errc code) noexcept;

/// True for errors that stem from reading or parsing input files, as opposed
/// to content that parsed but failed validation.
bool is_io_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wavescope
