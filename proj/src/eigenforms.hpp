#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "series.hpp"
#include "util.hpp"

namespace qprog {

// Level-1 holomorphic Hecke eigenform of even weight >= 12.
//
// Exact tables (dim S_weight = 1) carry integer coefficients a(1..nmax);
// every table carries the normalized eigenvalues lambda(n) = a(n)/n^((w-1)/2)
// as binary64.  Tables are immutable once built and sorted by lambda(2)
// ascending (ties broken by lambda(3)).
struct EigenformTable {
    i64 weight = 0;
    i64 index = 0;
    i64 nmax = 0;
    bool exact = false;
    std::vector<mpz_class> a;      // a[0] unused; present iff exact
    std::vector<double> lambda;    // lambda[0] unused

    double lambda_at(i64 n) const {
        if (n < 1 || n > nmax)
            throw RangeError("eigenform: index outside table range (nmax=" +
                                 std::to_string(nmax) + ")",
                             n);
        return lambda[static_cast<std::size_t>(n)];
    }
    const mpz_class& a_at(i64 n) const {
        if (!exact) throw ConfigError("eigenform: exact coefficients unavailable");
        if (n < 1 || n > nmax)
            throw RangeError("eigenform: index outside table range (nmax=" +
                                 std::to_string(nmax) + ")",
                             n);
        return a[static_cast<std::size_t>(n)];
    }
};

// Matrix of T_p on the echelonized Miller basis (exact).  Requires
// nmax >= p * dim S_weight.
std::vector<std::vector<mpq_class>> hecke_matrix(i64 weight, u64 p, i64 nmax);

// All eigenforms of the given weight, lambda tables filled to nmax.
// dim 0 weights return an empty vector.  When cache_dir is nonempty the
// tables are loaded from / stored to the on-disk cache.
std::vector<EigenformTable> eigenforms(i64 weight, i64 nmax,
                                       const std::string& cache_dir = "");

double normalized_lambda(const EigenformTable& t, i64 n);

// Cache: one JSON file per table, atomic write (temp + rename), FNV-1a
// checksum.  Version mismatch or missing file reads as "absent"; a
// checksum failure raises IngestError.
void cache_store(const EigenformTable& t, const std::string& dir);
std::optional<EigenformTable> cache_load(i64 weight, i64 index, i64 nmax,
                                         const std::string& dir);

}  // namespace qprog
