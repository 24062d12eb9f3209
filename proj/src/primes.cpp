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

#include "gramevo/primes.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gramevo {

PrimeTable::PrimeTable(std::vector<std::uint32_t> primes, std::uint32_t limit)
    : primes_(std::move(primes))
    , limit_(limit)
{
    if (!std::is_sorted(primes_.begin(), primes_.end()) || (!primes_.empty() && primes_.back() > limit_)) {
        throw std::invalid_argument("prime table must be increasing and bounded by its limit");
    }
}

PrimeTable sieve(std::uint32_t limit)
{
    if (limit < 2) {
        throw PrimesError(PrimesError::Kind::LimitTooSmall, "sieve limit must be at least 2");
    }
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) {
            continue;
        }
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) {
            composite[j] = true;
        }
    }
    return PrimeTable(std::move(primes), limit);
}

std::size_t prime_pi(std::uint64_t x, const PrimeTable& table)
{
    if (x > table.limit()) {
        throw PrimesError(PrimesError::Kind::OutOfTableRange,
            "pi(" + std::to_string(x) + ") is beyond the prime table limit " + std::to_string(table.limit()));
    }
    auto primes = table.primes();
    return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

Dataset::Dataset(std::vector<DataPoint> points, std::string name)
    : points_(std::move(points))
    , name_(std::move(name))
{
    if (points_.empty()) {
        throw DatasetError(DatasetError::Kind::InvalidDataset, "dataset is empty");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DatasetError(DatasetError::Kind::InvalidDataset, "dataset point " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(points_[i - 1].x < p.x)) {
            throw DatasetError(DatasetError::Kind::InvalidDataset, "dataset x values must be strictly increasing");
        }
    }
    xs_.reserve(points_.size());
    ys_.reserve(points_.size());
    for (const auto& p : points_) {
        xs_.push_back(p.x);
        ys_.push_back(p.y);
    }
}

double Dataset::target_variance() const noexcept
{
    double sum = 0.0;
    for (double y : ys_) {
        sum += y;
    }
    double mean = sum / static_cast<double>(ys_.size());
    double squares = 0.0;
    for (double y : ys_) {
        squares += (y - mean) * (y - mean);
    }
    return squares / static_cast<double>(ys_.size());
}

std::uint32_t required_limit(DatasetMode mode, std::size_t n)
{
    if (mode == DatasetMode::IntegerRange) {
        return static_cast<std::uint32_t>(std::max<std::size_t>(2, n + 1));
    }
    // Rosser's bound p_n < n (ln n + ln ln n) holds for n >= 6.
    if (n < 6) {
        return 13;
    }
    auto ln = std::log(static_cast<double>(n));
    return static_cast<std::uint32_t>(std::ceil(static_cast<double>(n) * (ln + std::log(ln))));
}

Dataset build_dataset(DatasetMode mode, std::size_t n, const PrimeTable& table)
{
    if (n == 0) {
        throw std::invalid_argument("dataset size must be positive");
    }
    std::vector<DataPoint> points;
    points.reserve(n);
    if (mode == DatasetMode::PrimeIndexed) {
        if (table.size() < n) {
            throw PrimesError(PrimesError::Kind::TableTooSmall,
                "prime table holds " + std::to_string(table.size()) + " primes, " + std::to_string(n) + " requested");
        }
        for (std::size_t i = 1; i <= n; ++i) {
            points.push_back({ static_cast<double>(table.nth(i)), static_cast<double>(i) });
        }
        return Dataset(std::move(points), "pi-prime-indexed-" + std::to_string(n));
    }

    if (table.limit() < n + 1) {
        throw PrimesError(PrimesError::Kind::TableTooSmall,
            "prime table limit " + std::to_string(table.limit()) + " is below " + std::to_string(n + 1));
    }
    for (std::uint64_t x = 2; x <= n + 1; ++x) {
        points.push_back({ static_cast<double>(x), static_cast<double>(prime_pi(x, table)) });
    }
    return Dataset(std::move(points), "pi-integer-range-" + std::to_string(n));
}

std::string format_real(double value)
{
    std::array<char, 64> buffer {};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc {}) {
        throw std::runtime_error("cannot format number");
    }
    return { buffer.data(), end };
}

void write_dataset(const Dataset& dataset, const std::string& path)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";

    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DatasetError(DatasetError::Kind::IoError, "cannot open '" + path + "' for writing");
        }
        out << "x\ty\n";
        for (const auto& p : dataset.points()) {
            out << format_real(p.x) << '\t' << format_real(p.y) << '\n';
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw DatasetError(DatasetError::Kind::IoError, "failed writing '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw DatasetError(DatasetError::Kind::IoError, "cannot move dataset into '" + path + "': " + ec.message());
    }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            ++i;
        }
        if (i > start) {
            fields.push_back(line.substr(start, i - start));
        }
    }
    return fields;
}

bool parse_real(std::string_view field, double& value)
{
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc {} && end == field.data() + field.size() && std::isfinite(value);
}

} // namespace

Dataset read_dataset(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError(DatasetError::Kind::IoError, "cannot open dataset '" + path + "'");
    }

    auto format_error = [&](std::size_t line, const std::string& what) {
        return DatasetError(DatasetError::Kind::FormatError, path + ":" + std::to_string(line) + ": " + what, line);
    };

    std::vector<DataPoint> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto fields = split_fields(line);
        if (line_no == 1) {
            if (fields.size() != 2 || fields[0] != "x" || fields[1] != "y") {
                throw format_error(1, "expected header 'x<TAB>y'");
            }
            continue;
        }
        if (fields.empty()) {
            continue;
        }
        DataPoint p {};
        if (fields.size() != 2 || !parse_real(fields[0], p.x) || !parse_real(fields[1], p.y)) {
            throw format_error(line_no, "expected two finite numbers");
        }
        if (!points.empty() && !(points.back().x < p.x)) {
            throw format_error(line_no, "x values must be strictly increasing");
        }
        points.push_back(p);
    }
    if (line_no == 0) {
        throw format_error(1, "missing header");
    }
    if (points.empty()) {
        throw format_error(line_no + 1, "dataset has no data lines");
    }
    return Dataset(std::move(points), std::filesystem::path(path).stem().string());
}

} // namespace gramevo
