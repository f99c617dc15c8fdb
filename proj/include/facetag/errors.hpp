// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace facetag {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two vectors (or a probe and a gallery) disagree on dimensionality.
class DimensionError : public Error {
public:
    DimensionError(std::size_t expected, std::size_t got, const std::string& context = {})
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got) + (context.empty() ? "" : " (" + context + ")")),
          expected_(expected),
          got_(got) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t got() const noexcept { return got_; }

private:
    std::size_t expected_;
    std::size_t got_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& cause)
        : Error("io error: " + path + ": " + cause), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Malformed gallery file; offset is the byte position of the defect.
class FormatError : public Error {
public:
    FormatError(std::uint64_t offset, const std::string& cause)
        : Error("format error at byte " + std::to_string(offset) + ": " + cause),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class DecodeError : public Error {
public:
    DecodeError(std::string path, const std::string& cause)
        : Error("decode error: " + path + ": " + cause), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ProviderError : public Error {
public:
    using Error::Error;
};

// Benchmark correctness cross-check failed.
class BenchError : public Error {
public:
    using Error::Error;
};

}  // namespace facetag
