#pragma once

// WAV (RIFF, PCM 16-bit mono little-endian) reader/writer. Samples map to
// doubles in [-1, 1) via division by 32768.

#include <string>

#include "mlrm/signal.hpp"

namespace mlrm {

AudioClip read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace mlrm
