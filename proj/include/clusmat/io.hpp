#pragma once

#include <filesystem>
#include <iosfwd>

#include "clusmat/bitmatrix.hpp"

namespace clusmat::io {

// Text ".bm": "p q" header line, then p lines of exactly q '0'/'1' characters.
BitMatrix read_bm(std::istream& in);
void write_bm(std::ostream& out, const BitMatrix& m);

// Binary ".bmb": "BM01", u64 p, u64 q, p*ceil(q/64) u64 words; all little-endian.
BitMatrix read_bmb(std::istream& in);
void write_bmb(std::ostream& out, const BitMatrix& m);

/// Dispatch on extension: ".bmb" is binary, anything else is text.
BitMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const BitMatrix& m);

/// p lines of r comma-separated decimal integers.
void write_csv(std::ostream& out, const IntMatrix& m);
IntMatrix read_csv(std::istream& in);

// Little-endian primitives shared by the binary containers.
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
std::uint32_t get_u32(std::istream& in);
std::uint64_t get_u64(std::istream& in);

/// FNV-1a over dimensions and packed words; identifies a matrix independent of file format.
std::uint64_t digest(const BitMatrix& m);

}  // namespace clusmat::io
