// Copyright 2026 The gramevo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAMEVO_PRIMES_HPP
#define GRAMEVO_PRIMES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gramevo {

class PrimesError : public std::runtime_error {
public:
    enum class Kind { LimitTooSmall, OutOfTableRange, TableTooSmall };

    PrimesError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) { }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class DatasetError : public std::runtime_error {
public:
    enum class Kind { IoError, FormatError, InvalidDataset };

    DatasetError(Kind kind, const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), kind_(kind), line_(line) { }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    // One-based line number for FormatError, zero otherwise.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

// All primes up to `limit`, in increasing order.
class PrimeTable {
public:
    PrimeTable(std::vector<std::uint32_t> primes, std::uint32_t limit);

    [[nodiscard]] std::span<const std::uint32_t> primes() const noexcept { return primes_; }
    [[nodiscard]] std::uint32_t limit() const noexcept { return limit_; }
    [[nodiscard]] std::size_t size() const noexcept { return primes_.size(); }
    // i-th prime, 1-indexed.
    [[nodiscard]] std::uint32_t nth(std::size_t i) const { return primes_.at(i - 1); }

private:
    std::vector<std::uint32_t> primes_;
    std::uint32_t limit_;
};

// Sieve of Eratosthenes; throws LimitTooSmall for limit < 2.
[[nodiscard]] PrimeTable sieve(std::uint32_t limit);

// Number of primes <= x. Throws OutOfTableRange when x exceeds the table limit.
[[nodiscard]] std::size_t prime_pi(std::uint64_t x, const PrimeTable& table);

struct DataPoint {
    double x;
    double y;

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

// Ordered regression target. Non-empty, finite, strictly increasing in x.
class Dataset {
public:
    Dataset(std::vector<DataPoint> points, std::string name);

    [[nodiscard]] std::span<const DataPoint> points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> xs() const noexcept { return xs_; }
    [[nodiscard]] std::span<const double> ys() const noexcept { return ys_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    // Population variance of y: the MSE of the best constant predictor.
    [[nodiscard]] double target_variance() const noexcept;

private:
    std::vector<DataPoint> points_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::string name_;
};

enum class DatasetMode {
    // (p_i, i) for the first n primes.
    PrimeIndexed,
    // (x, pi(x)) for x = 2 .. n + 1.
    IntegerRange,
};

[[nodiscard]] Dataset build_dataset(DatasetMode mode, std::size_t n, const PrimeTable& table);

// Smallest sieve limit that makes build_dataset(mode, n, ...) succeed.
[[nodiscard]] std::uint32_t required_limit(DatasetMode mode, std::size_t n);

// Tab-separated text: a header line `x<TAB>y`, then one `x<TAB>y` line per
// point, `\n` line endings, shortest round-trip decimal rendering. The file
// is written to a temporary sibling and renamed into place.
void write_dataset(const Dataset& dataset, const std::string& path);
[[nodiscard]] Dataset read_dataset(const std::string& path);

[[nodiscard]] std::string format_real(double value);

} // namespace gramevo

#endif
