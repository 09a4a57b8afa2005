#pragma once

#include <string>
#include <vector>

#include "chf/mlp.hpp"
#include "chf/state.hpp"

namespace chf {

/// One experimental CHF measurement in local-conditions form, with
/// optional inlet bookkeeping columns.
struct ChfPoint {
    LocalState state;
    double exp_chf_kwm2 = 0.0;
    bool has_dhsub = false;
    double dhsub_kjkg = 0.0;   // inlet subcooling
    bool has_lh = false;
    double lh_m = 0.0;         // heated length
};

struct IngestReport {
    std::vector<ChfPoint> points;
    size_t dropped = 0;                   // negative-subcooling rows
    std::vector<std::string> warnings;    // e.g. unknown columns
};

/// Reads a CHF-point CSV with header
/// `Dhe_m,P_kPa,G_kgm2s,x,chf_kWm2[,dhsub_kJkg,Lh_m]` (`#` comments,
/// unknown columns warned and ignored). Rows with dhsub_kJkg < 0 are
/// dropped and counted. Malformed rows raise InputError with the line
/// number.
IngestReport ingest_csv(const std::string& path);

/// Projects points to (state, measured CHF) training samples.
std::vector<TrainSample> to_train_samples(const std::vector<ChfPoint>& points);

struct SplitSpec {
    double f_train = 0.90;
    double f_val = 0.05;
    double f_test = 0.05;
    uint64_t seed = 0;
};

struct SplitSizes {
    size_t train;
    size_t val;
    size_t test;
};

/// val and test get floor(n * fraction); the remainder goes to train.
SplitSizes split_sizes(size_t n, const SplitSpec& spec);

struct SplitResult {
    std::vector<ChfPoint> train;
    std::vector<ChfPoint> val;
    std::vector<ChfPoint> test;
};

/// Seeded shuffle, then contiguous partition in train/val/test order.
/// Disjoint and exhaustive by construction.
SplitResult split(std::vector<ChfPoint> points, const SplitSpec& spec);

} // namespace chf
