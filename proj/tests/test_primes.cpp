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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gramevo/primes.hpp"
#include "gramevo/random.hpp"
#include "support.hpp"

using namespace gramevo;
using gramevo::testing::primes_by_division;

namespace {

std::vector<std::uint32_t> to_vector(const PrimeTable& t)
{
    return { t.primes().begin(), t.primes().end() };
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::size_t format_error_line(const std::string& path)
{
    try {
        (void)read_dataset(path);
    } catch (const DatasetError& e) {
        CHECK(e.kind() == DatasetError::Kind::FormatError);
        return e.line();
    }
    FAIL("expected FormatError");
    return 0;
}

} // namespace

TEST_CASE("sieve small limits")
{
    CHECK(to_vector(sieve(10)) == std::vector<std::uint32_t> { 2, 3, 5, 7 });
    CHECK(to_vector(sieve(2)) == std::vector<std::uint32_t> { 2 });
    CHECK(to_vector(sieve(3)) == std::vector<std::uint32_t> { 2, 3 });
    CHECK_THROWS_AS((void)sieve(1), PrimesError);
    CHECK_THROWS_AS((void)sieve(0), PrimesError);
}

TEST_CASE("sieve(8000) holds 1007 primes, the 1000th being 7919")
{
    auto t = sieve(8000);
    CHECK(t.size() == 1007);
    CHECK(primes_by_division(8000).size() == 1007);
    CHECK(t.nth(1) == 2);
    CHECK(t.nth(1000) == 7919);
}

TEST_CASE("sieve matches trial division up to 10^4")
{
    for (std::uint32_t limit : { 2u, 3u, 4u, 5u, 97u, 100u, 1000u, 7919u, 7920u, 9973u, 10000u }) {
        CAPTURE(limit);
        CHECK(to_vector(sieve(limit)) == primes_by_division(limit));
    }
    auto full = sieve(10000);
    auto oracle = primes_by_division(10000);
    for (std::uint32_t limit = 2; limit <= 10000; limit += 37) {
        std::vector<std::uint32_t> prefix;
        for (auto p : oracle) {
            if (p <= limit) {
                prefix.push_back(p);
            }
        }
        REQUIRE(to_vector(sieve(limit)) == prefix);
    }
    CHECK(to_vector(full) == oracle);
}

TEST_CASE("prime_pi")
{
    auto t = sieve(8000);
    CHECK(prime_pi(100, t) == 25);
    CHECK(prime_pi(1400, t) == 222);
    CHECK(prime_pi(2, t) == 1);
    CHECK(prime_pi(1, t) == 0);
    CHECK(prime_pi(0, t) == 0);
    CHECK(prime_pi(7919, t) == 1000);
    CHECK(prime_pi(8000, t) == 1007);
    CHECK_THROWS_AS((void)prime_pi(8001, t), PrimesError);
}

TEST_CASE("prime_pi steps by one exactly at primes")
{
    auto t = sieve(10000);
    for (std::uint64_t p = 1; p <= 10000; ++p) {
        auto step = prime_pi(p, t) - prime_pi(p - 1, t);
        REQUIRE(step == (testing::is_prime_by_division(p) ? 1u : 0u));
    }
}

TEST_CASE("prime-indexed dataset")
{
    auto t = sieve(8000);
    auto d = build_dataset(DatasetMode::PrimeIndexed, 1000, t);
    REQUIRE(d.size() == 1000);
    CHECK(d.points().front() == DataPoint { 2, 1 });
    CHECK(d.points().back() == DataPoint { 7919, 1000 });
    for (const auto& p : d.points()) {
        auto x = static_cast<std::uint64_t>(p.x);
        REQUIRE(testing::is_prime_by_division(x));
        REQUIRE(static_cast<double>(prime_pi(x, t)) == p.y);
    }

    auto single = build_dataset(DatasetMode::PrimeIndexed, 1, t);
    REQUIRE(single.size() == 1);
    CHECK(single.points()[0] == DataPoint { 2, 1 });

    CHECK_THROWS_AS((void)build_dataset(DatasetMode::PrimeIndexed, 1008, t), PrimesError);
    CHECK(required_limit(DatasetMode::PrimeIndexed, 1000) >= 7919);
    for (std::size_t n : { 1u, 2u, 5u, 6u, 7u, 100u, 1000u, 5000u }) {
        CAPTURE(n);
        CHECK(sieve(required_limit(DatasetMode::PrimeIndexed, n)).size() >= n);
    }
}

TEST_CASE("integer-range dataset")
{
    auto t = sieve(100);
    auto d = build_dataset(DatasetMode::IntegerRange, 9, t);
    std::vector<double> xs(d.xs().begin(), d.xs().end());
    std::vector<double> ys(d.ys().begin(), d.ys().end());
    CHECK(xs == std::vector<double> { 2, 3, 4, 5, 6, 7, 8, 9, 10 });
    CHECK(ys == std::vector<double> { 1, 2, 2, 3, 3, 4, 4, 4, 4 });
    CHECK_THROWS_AS((void)build_dataset(DatasetMode::IntegerRange, 100, t), PrimesError);
    CHECK(build_dataset(DatasetMode::IntegerRange, 99, t).points().back() == DataPoint { 100, 25 });
}

TEST_CASE("dataset invariants")
{
    CHECK_THROWS_AS(Dataset({}, "empty"), DatasetError);
    CHECK_THROWS_AS(Dataset({ { 1, 1 }, { 1, 2 } }, "dup"), DatasetError);
    CHECK_THROWS_AS(Dataset({ { 2, 1 }, { 1, 2 } }, "order"), DatasetError);
    CHECK_THROWS_AS(Dataset({ { 1, NAN } }, "nan"), DatasetError);
    Dataset d({ { 1, 1 }, { 2, 2 }, { 3, 3 } }, "line");
    CHECK(d.target_variance() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("dataset file format")
{
    testing::TempDir dir;
    auto t = sieve(8000);
    auto d = build_dataset(DatasetMode::PrimeIndexed, 1000, t);
    auto path = dir.file("pi.txt");
    write_dataset(d, path);

    auto text = testing::slurp(path);
    CHECK(text.rfind("x\ty\n2\t1\n3\t2\n5\t3\n", 0) == 0);
    CHECK(text.size() >= 10);
    CHECK(text.substr(text.size() - 10) == "7919\t1000\n");
    CHECK(text.find(' ') == std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    auto back = read_dataset(path);
    CHECK(back.size() == d.size());
    CHECK(std::equal(back.points().begin(), back.points().end(), d.points().begin(), d.points().end()));
}

TEST_CASE("dataset round trip for arbitrary finite reals")
{
    testing::TempDir dir;
    RandomStream rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DataPoint> points;
        double x = -1e6 * rng.uniform();
        auto n = 1 + rng.below(200);
        for (std::size_t i = 0; i < n; ++i) {
            x += 1e-3 + rng.uniform() * 1e3;
            double y = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(40)) - 20.0);
            points.push_back({ x, y });
        }
        Dataset d(points, "random");
        auto path = dir.file("r.txt");
        write_dataset(d, path);
        auto back = read_dataset(path);
        REQUIRE(std::equal(back.points().begin(), back.points().end(), d.points().begin(), d.points().end()));
    }
}

TEST_CASE("malformed dataset files")
{
    testing::TempDir dir;
    auto path = dir.file("bad.txt");

    write_text(path, "x\ty\n");
    CHECK(format_error_line(path) == 2);

    write_text(path, "x y\nabc 1\n");
    CHECK(format_error_line(path) == 2);

    write_text(path, "x\ty\n1\t2\n2\t3\t4\n");
    CHECK(format_error_line(path) == 3);

    write_text(path, "x\ty\n2\t1\n2\t2\n");
    CHECK(format_error_line(path) == 3);

    write_text(path, "1\t2\n");
    CHECK(format_error_line(path) == 1);

    write_text(path, "");
    CHECK(format_error_line(path) == 1);

    write_text(path, "x\ty\n1\tnan\n");
    CHECK(format_error_line(path) == 2);

    // spaces and CRLF are tolerated on input
    write_text(path, "x y\r\n1 2\r\n3   4\r\n");
    auto d = read_dataset(path);
    CHECK(d.size() == 2);
    CHECK(d.points()[1] == DataPoint { 3, 4 });

    try {
        (void)read_dataset(dir.file("missing.txt"));
        FAIL("no throw");
    } catch (const DatasetError& e) {
        CHECK(e.kind() == DatasetError::Kind::IoError);
    }
}

TEST_CASE("unwritable dataset path leaves nothing behind")
{
    testing::TempDir dir;
    auto d = build_dataset(DatasetMode::PrimeIndexed, 3, sieve(10));
    auto path = dir.file("no/such/dir/pi.txt");
    CHECK_THROWS_AS(write_dataset(d, path), DatasetError);
    CHECK_FALSE(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}
