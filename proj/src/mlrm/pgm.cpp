#include "mlrm/pgm.hpp"

#include <fstream>

#include "mlrm/error.hpp"

namespace mlrm {
namespace {

// next whitespace-delimited token, treating '#' as a comment to end-of-line
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

std::size_t parse_dim(const std::string& tok, const std::string& path) {
    if (tok.empty()) fail(Err::FormatError, path + ": truncated PGM header");
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            fail(Err::FormatError, path + ": malformed PGM header token '" + tok + "'");
        }
    }
    return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace

ImageFrame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoError, "cannot open '" + path + "'");

    if (next_token(in) != "P5") fail(Err::FormatError, path + ": not a binary PGM (P5)");
    ImageFrame frame;
    frame.width = parse_dim(next_token(in), path);
    frame.height = parse_dim(next_token(in), path);
    std::size_t maxval = parse_dim(next_token(in), path);
    if (frame.width == 0 || frame.height == 0) {
        fail(Err::FormatError, path + ": zero image dimension");
    }
    if (maxval != 255) {
        fail(Err::FormatError, path + ": unsupported maxval " + std::to_string(maxval));
    }

    frame.pixels.resize(frame.size());
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size())) {
        fail(Err::FormatError, path + ": pixel data truncated");
    }
    return frame;
}

void write_pgm(const std::string& path, const ImageFrame& frame) {
    if (frame.width == 0 || frame.height == 0 || frame.pixels.size() != frame.size()) {
        fail(Err::ShapeMismatch, "refusing to write a malformed frame");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::IoError, "cannot open '" + path + "' for writing");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out) fail(Err::IoError, "short write to '" + path + "'");
}

}  // namespace mlrm
