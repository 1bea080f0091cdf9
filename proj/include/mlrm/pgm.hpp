#pragma once

// Binary PGM (P5, maxval 255) reader/writer.

#include <string>

#include "mlrm/signal.hpp"

namespace mlrm {

ImageFrame read_pgm(const std::string& path);
void write_pgm(const std::string& path, const ImageFrame& frame);

}  // namespace mlrm
