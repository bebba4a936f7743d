// Acceptance gate: one binary, ten checks, one PASS/FAIL line each.
// Every numeric claim is checked against the brute-force oracles in
// oracles.cpp or against checked-in golden files, never against the
// library's own output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mini_dataset.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "tumorseg/augment.hpp"
#include "tumorseg/cli.hpp"
#include "tumorseg/mask_ops.hpp"
#include "tumorseg/metrics.hpp"
#include "tumorseg/naming.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/parallel.hpp"
#include "tumorseg/png_io.hpp"
#include "tumorseg/preprocess.hpp"
#include "tumorseg/report.hpp"
#include "tumorseg/rng.hpp"
#include "tumorseg/stats.hpp"
#include "tumorseg/sym_eigen.hpp"

using namespace tumorseg;
namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1

void metric_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  DetRng rng(2024);
  int hausdorff_pairs = 0, empty_pairs = 0;
  for (int pair = 0; pair < 10000; ++pair) {
    const int rows = 1 + static_cast<int>(rng.bounded(32));
    const int cols = 1 + static_cast<int>(rng.bounded(32));
    const BinaryMask a = oracle::random_mask(rng, rows, cols, rng.uniform(0.05, 0.95), false);
    const BinaryMask b = oracle::random_mask(rng, rows, cols, rng.uniform(0.05, 0.95), false);
    Spacing2 sp;
    if (pair % 5 == 4) sp = {rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)};

    const double want_dice = oracle::dice(a, b);
    require(dice(a, b) == want_dice,
            "dice mismatch at pair " + std::to_string(pair) + ": got " + fmt(dice(a, b)) +
                ", oracle " + fmt(want_dice));

    const auto want = oracle::hausdorff(a, b, sp);
    const MetricResult result = evaluate_masks(a, b, sp);
    require(result.defined_hd == want.has_value(),
            "hausdorff definedness mismatch at pair " + std::to_string(pair));
    if (!want) {
      ++empty_pairs;
      continue;
    }
    require(std::abs(result.hd - want->hd) <= 1e-9,
            "hd mismatch at pair " + std::to_string(pair) + ": got " + fmt(result.hd) +
                ", oracle " + fmt(want->hd));
    require(std::abs(result.hd95 - want->hd95) <= 1e-9,
            "hd95 mismatch at pair " + std::to_string(pair) + ": got " + fmt(result.hd95) +
                ", oracle " + fmt(want->hd95));
    ++hausdorff_pairs;
  }
  require(hausdorff_pairs >= 9000, "too few nonempty pairs exercised the distance path");
  require(empty_pairs >= 10, "no empty-mask pairs exercised the undefined path");
  const double dt = seconds_since(t0);
  require(dt < 60.0, "runtime budget blown: " + fmt(dt) + " s >= 60 s");
}

// ---------------------------------------------------------------- criterion 2

void distance_transform_exactness() {
  DetRng rng(777);
  for (int trial = 0; trial < 1000; ++trial) {
    const double density = (trial % 2) ? rng.uniform(0.02, 0.15) : rng.uniform(0.2, 0.6);
    const BinaryMask m = oracle::random_mask(rng, 32, 32, density, true);
    Spacing2 sp;
    if (trial % 4 == 3) sp = {rng.uniform(0.3, 2.5), rng.uniform(0.3, 2.5)};

    const Grid2<double> got = distance_transform(m, sp);
    const Grid2<double> want = oracle::distance_transform(m, sp);
    for (int r = 0; r < 32; ++r)
      for (int c = 0; c < 32; ++c)
        require(std::abs(got(r, c) - want(r, c)) <= 1e-9,
                "dt mismatch at trial " + std::to_string(trial) + " pixel (" + std::to_string(r) +
                    "," + std::to_string(c) + "): got " + fmt(got(r, c)) + ", oracle " +
                    fmt(want(r, c)));
  }
}

// ---------------------------------------------------------------- criterion 3

void metric_spot_values() {
  // |X| = |Y| = 4 with overlap 2: two 2x2 blocks one column apart.
  BinaryMask x(4, 4, 0), y(4, 4, 0);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      x(r, c) = 1;
      y(r, c + 1) = 1;
    }
  require(dice(x, y) == 0.5, "dice of the 4/4/overlap-2 case must be exactly 0.5");

  // Single pixels at (0,0) and (3,4): a 3-4-5 triangle.
  BinaryMask p(5, 6, 0), q(5, 6, 0);
  p(0, 0) = 1;
  q(3, 4) = 1;
  const auto [hd, hd95] = hausdorff(p, q);
  require(hd == 5.0 && hd95 == 5.0, "single-pixel pair must give hd = hd95 = 5, got " + fmt(hd) +
                                        " / " + fmt(hd95));

  DetRng rng(31);
  const BinaryMask m = oracle::random_mask(rng, 12, 12, 0.4, true);
  require(dice(m, m) == 1.0, "identical masks must give dice 1");
  const auto self = hausdorff(m, m);
  require(self.first == 0.0 && self.second == 0.0, "identical masks must give hd 0");

  BinaryMask left(6, 6, 0), right(6, 6, 0);
  left(2, 0) = 1;
  right(2, 5) = 1;
  require(dice(left, right) == 0.0, "disjoint masks must give dice 0");
  require(dice(BinaryMask(6, 6, 0), BinaryMask(6, 6, 0)) == 1.0, "two empty masks agree: dice 1");
}

// ---------------------------------------------------------------- criterion 4

void wilcoxon_exactness() {
  DetRng rng(4242);

  // Exact path against full 2^n enumeration, with ties and zeros in play.
  int compared = 0;
  for (std::size_t n = 2; n <= 12; ++n)
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<double>(rng.bounded(12)) / 2.0;
        b[i] = static_cast<double>(rng.bounded(12)) / 2.0;
      }
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) any = any || a[i] != b[i];
      if (!any) continue;

      const PairedTestResult got = wilcoxon_signed_rank(a, b);
      const oracle::WilcoxonResult want = oracle::wilcoxon_enumerated(a, b);
      require(got.method == TestMethod::Exact, "small n must use the exact method");
      require(got.n_effective == want.n_effective, "n_effective mismatch at n=" +
                                                        std::to_string(n));
      require(got.statistic_w == want.w, "W mismatch: got " + fmt(got.statistic_w) +
                                             ", enumeration " + fmt(want.w));
      require(std::abs(got.p_value - want.p) <= 1e-12,
              "exact p mismatch: got " + fmt(got.p_value) + ", enumeration " + fmt(want.p));
      ++compared;
    }
  require(compared > 1200, "too few enumeration comparisons ran");

  // Near the method cutover the exact and approximate p-values must agree.
  for (std::size_t n = 20; n <= 25; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.uniform(0.0, 1.0);
        b[i] = a[i] - rng.uniform(-0.2, 0.25);
      }
      const PairedTestResult got = wilcoxon_signed_rank(a, b);
      require(got.method == TestMethod::Exact, "n <= 25 must use the exact method");
      const double approx = oracle::wilcoxon_normal_p(a, b);
      require(std::abs(got.p_value - approx) < 0.01,
              "exact vs normal-approx diverge at n=" + std::to_string(n) + ": " +
                  fmt(got.p_value) + " vs " + fmt(approx));
    }

  // All-positive differences {+1..+5}.
  const PairedTestResult five =
      wilcoxon_signed_rank({1, 2, 3, 4, 5}, {0, 0, 0, 0, 0});
  require(five.statistic_w == 0.0 && five.p_value == 0.0625,
          "{+1..+5} must give W = 0 and p = 0.0625 exactly, got " + fmt(five.p_value));
}

// ---------------------------------------------------------------- criterion 5

Mat4 covariance_of(const ModalitySlice& slice) {
  const int n = slice.rows() * slice.cols();
  std::array<double, 4> mean{};
  for (int m = 0; m < 4; ++m) {
    for (const float v : slice.planes[m]) mean[m] += v;
    mean[m] /= n;
  }
  Mat4 cov{};
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        cov[a][b] += (slice.planes[a].data()[i] - mean[a]) *
                     (slice.planes[b].data()[i] - mean[b]) / n;
  return cov;
}

ModalitySlice random_slice(DetRng& rng, int rows, int cols, double scale) {
  ModalitySlice slice;
  for (auto& plane : slice.planes) {
    plane = PlaneF(rows, cols);
    for (float& v : plane) v = static_cast<float>(rng.uniform(0.0, scale));
  }
  return slice;
}

void pca_properties() {
  DetRng rng(555);

  // Eigen solver residual on random symmetric matrices.
  for (int trial = 0; trial < 200; ++trial) {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) m[i][j] = m[j][i] = rng.uniform(-10.0, 10.0);
    const EigenResult4 eig = symmetric_eigen_4(m);
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < 4; ++i) {
        double av = 0.0;
        for (int j = 0; j < 4; ++j) av += m[i][j] * eig.eigenvectors[k][j];
        require(std::abs(av - eig.eigenvalues[k] * eig.eigenvectors[k][i]) < 1e-8,
                "eigen residual exceeds 1e-8 at trial " + std::to_string(trial));
      }
      if (k > 0)
        require(eig.eigenvalues[k] <= eig.eigenvalues[k - 1], "eigenvalues not descending");
    }
  }

  // Sum of eigenvalues equals the covariance trace.
  for (int trial = 0; trial < 100; ++trial) {
    const ModalitySlice slice = random_slice(rng, 8, 8, 4.0);
    const PcaFusion fusion = pca_fuse(slice);
    const Mat4 cov = covariance_of(slice);
    const double trace = cov[0][0] + cov[1][1] + cov[2][2] + cov[3][3];
    double sum = 0.0;
    for (double ev : fusion.eigen.eigenvalues) sum += ev;
    require(std::abs(sum - trace) < 1e-9, "eigenvalue sum differs from covariance trace by " +
                                              fmt(std::abs(sum - trace)));
  }

  // A duplicated modality leaves rank <= 3: three components reconstruct.
  for (int trial = 0; trial < 20; ++trial) {
    ModalitySlice slice = random_slice(rng, 12, 10, 1.0);
    slice.planes[3] = slice.planes[1];
    const PcaFusion fusion = pca_fuse(slice);
    const int n = slice.rows() * slice.cols();
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < 4; ++m) {
        double recon = fusion.mean[m];
        for (int k = 0; k < 3; ++k)
          recon += fusion.components[k].data()[i] * fusion.eigen.eigenvectors[k][m];
        require(std::abs(recon - slice.planes[m].data()[i]) < 1e-6,
                "duplicated-modality reconstruction error >= 1e-6 at trial " +
                    std::to_string(trial));
      }
  }

  // All four modalities equal: variance lives entirely in component 1.
  ModalitySlice flat = random_slice(rng, 9, 9, 1.0);
  flat.planes[1] = flat.planes[0];
  flat.planes[2] = flat.planes[0];
  flat.planes[3] = flat.planes[0];
  const PcaFusion fusion = pca_fuse(flat);
  for (int k = 1; k < 3; ++k)
    for (const float v : fusion.components[k])
      require(std::abs(v) <= 1e-9,
              "component " + std::to_string(k + 1) + " not zero for all-equal modalities");
}

// ---------------------------------------------------------------- criterion 6

void augmentation_determinism() {
  DetRng rng(5);
  PlaneF image(32, 32);
  for (float& v : image) v = static_cast<float>(rng.uniform(0.0, 255.0));
  BinaryMask mask(32, 32, 0);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c)
      if ((r - 16) * (r - 16) + (c - 16) * (c - 16) <= 81) mask(r, c) = 1;

  AugmentationConfig config;
  config.p_rotate = 0.7;
  config.p_elastic = 0.6;
  config.elastic_alpha = 12.0;
  config.elastic_sigma = 3.0;
  config.master_seed = 99;

  constexpr std::size_t kBatch = 64;
  auto run_batch = [&](unsigned threads) {
    std::vector<std::pair<PlaneF, BinaryMask>> out(kBatch);
    parallel_for(
        kBatch, [&](std::size_t i) { out[i] = augment_sample(image, mask, config, 1, i); },
        threads);
    return out;
  };
  const auto first = run_batch(1);
  const auto again = run_batch(1);
  const auto parallel = run_batch(8);
  for (std::size_t i = 0; i < kBatch; ++i) {
    require(first[i].first == again[i].first && first[i].second == again[i].second,
            "rerun differs at sample " + std::to_string(i));
    require(first[i].first == parallel[i].first && first[i].second == parallel[i].second,
            "parallel run differs at sample " + std::to_string(i));
  }

  // Angle draws stay inside the configured bound and actually use the range.
  AugmentationConfig always;
  always.p_rotate = 1.0;
  always.p_elastic = 0.0;
  always.master_seed = 7;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const AugmentPlan plan = make_augment_plan(always, 0, i, 8, 8);
    require(plan.rotated, "p_rotate = 1 must always rotate");
    require(std::abs(plan.angle_deg) <= 20.0,
            "angle " + fmt(plan.angle_deg) + " outside +/-20 at draw " + std::to_string(i));
    lo = std::min(lo, plan.angle_deg);
    hi = std::max(hi, plan.angle_deg);
  }
  require(lo < -15.0 && hi > 15.0, "angle draws did not cover the configured range");

  // alpha = 0 and angle = 0 are exact identities.
  const DisplacementField zero_field = elastic_field(32, 32, 0.0, 3.0, 1234);
  for (const float v : zero_field.dx) require(v == 0.0f, "alpha = 0 field has nonzero dx");
  for (const float v : zero_field.dy) require(v == 0.0f, "alpha = 0 field has nonzero dy");
  const auto warped = elastic_deform(image, mask, zero_field);
  require(warped.first == image && warped.second == mask, "zero field is not the identity");
  const auto unrotated = rotate(image, mask, 0.0);
  require(unrotated.first == image && unrotated.second == mask, "0 degrees is not the identity");
}

// ---------------------------------------------------------------- criterion 7

void nifti_round_trip() {
  testutil::TempDir tmp("acceptance_nifti");
  const std::array<NiftiDatatype, 5> datatypes = {NiftiDatatype::U8, NiftiDatatype::I16,
                                                  NiftiDatatype::I32, NiftiDatatype::F32,
                                                  NiftiDatatype::F64};
  const std::array<Endian, 2> endians = {Endian::Little, Endian::Big};

  int written = 0;
  for (const NiftiDatatype dt : datatypes)
    for (const Endian endian : endians) {
      RawNifti img;
      img.header.ndim = 3;
      img.header.dim = {5, 4, 3, 1, 1, 1, 1};
      img.header.datatype = dt;
      img.header.bitpix = nifti_bitpix(dt);
      img.header.pixdim = {0.75, 1.25, 2.5, 1, 1, 1, 1};  // exact in float32
      const std::size_t n = 5 * 4 * 3;
      switch (dt) {
        case NiftiDatatype::U8: {
          std::vector<std::uint8_t> v(n);
          for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(i * 131 + 7);
          img.data = std::move(v);
          break;
        }
        case NiftiDatatype::I16: {
          std::vector<std::int16_t> v(n);
          for (std::size_t i = 0; i < n; ++i)
            v[i] = static_cast<std::int16_t>(static_cast<int>(i * 37) % 20001 - 10000);
          img.data = std::move(v);
          break;
        }
        case NiftiDatatype::I32: {
          std::vector<std::int32_t> v(n);
          for (std::size_t i = 0; i < n; ++i)
            v[i] = static_cast<std::int32_t>(i * 2654435761u);
          img.data = std::move(v);
          break;
        }
        case NiftiDatatype::F32: {
          std::vector<float> v(n);
          for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<float>(i) * 0.37f - 100.5f;
          img.data = std::move(v);
          break;
        }
        case NiftiDatatype::F64: {
          std::vector<double> v(n);
          for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i) * 0.0625 - 55.25;
          img.data = std::move(v);
          break;
        }
      }

      const std::string tag = std::to_string(static_cast<int>(dt)) + "_" +
                              (endian == Endian::Big ? "be" : "le");
      // Alternate containers so both the plain and gzip paths are covered.
      const fs::path path = tmp / ("rt_" + tag + (written % 2 ? ".nii.gz" : ".nii"));
      write_nifti(img, path, endian);
      ++written;

      const RawNifti back = read_nifti(path);
      require(back.header.ndim == 3 && back.header.dim == img.header.dim,
              "dims lost for datatype " + tag);
      require(back.header.datatype == dt, "datatype lost for " + tag);
      require(back.header.pixdim == img.header.pixdim, "pixdim lost for " + tag);
      require(back.header.big_endian == (endian == Endian::Big),
              "endianness flag wrong for " + tag);
      require(back.data == img.data, "voxel data lost for datatype " + tag);
    }

  // Decathlon-shaped 4D volume: 240 x 240 x 155 x 4 channels.
  RawNifti big;
  big.header.ndim = 4;
  big.header.dim = {240, 240, 155, 4, 1, 1, 1};
  big.header.datatype = NiftiDatatype::U8;
  big.header.bitpix = 8;
  std::vector<std::uint8_t> voxels(static_cast<std::size_t>(240) * 240 * 155 * 4);
  for (std::size_t i = 0; i < voxels.size(); ++i)
    voxels[i] = static_cast<std::uint8_t>((i * 2654435761u) >> 24);
  big.data = std::move(voxels);
  const fs::path big_path = tmp / "decathlon_shape.nii";
  write_nifti(big, big_path);
  const RawNifti big_back = read_nifti(big_path);
  require(big_back.header.ndim == 4, "decathlon ndim lost");
  require(big_back.header.dim == big.header.dim, "decathlon dims lost");
  require(big_back.data == big.data, "decathlon voxels lost");
}

// ---------------------------------------------------------------- criterion 8

void filter_rule() {
  // One slice holding 300 edema, 100 non-enhancing, 400 enhancing pixels.
  LabelVolume labels(1, 30, 40);
  int painted1 = 0, painted2 = 0, painted3 = 0;
  for (std::uint8_t& code : labels.codes()) {
    if (painted1 < 300) {
      code = kLabelEdema;
      ++painted1;
    } else if (painted2 < 100) {
      code = kLabelNonEnhancing;
      ++painted2;
    } else if (painted3 < 400) {
      code = kLabelEnhancing;
      ++painted3;
    } else {
      break;
    }
  }

  const FilterPolicy all{250, FilterMode::AllRois};
  for (Roi roi : kAllRois)
    require(!filter_slice(labels, 0, roi, all),
            "(300,100,400) must be discarded under all_rois for every roi");

  const FilterPolicy target{250, FilterMode::TargetRoi};
  require(filter_slice(labels, 0, Roi::Edema, target), "edema (300 px) must pass target_roi");
  require(!filter_slice(labels, 0, Roi::NonEnhancing, target),
          "non-enhancing (100 px) must fail target_roi");
  require(filter_slice(labels, 0, Roi::Enhancing, target),
          "enhancing (400 px) must pass target_roi");
  require(filter_slice(labels, 0, Roi::WholeTumor, target),
          "whole tumor (800 px) must pass target_roi");
}

// ---------------------------------------------------------------- criterion 9

// Commands chat on stdout/stderr; keep the gate's output to one line per
// criterion by swallowing it unless the command fails.
void run_cli_or_throw(const std::vector<std::string>& args) {
  std::ostringstream captured;
  std::streambuf* old_out = std::cout.rdbuf(captured.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(captured.rdbuf());
  int code = -1;
  try {
    code = cli::run(args);
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (code != 0) {
    std::string joined;
    for (const std::string& a : args) joined += a + " ";
    throw std::runtime_error("command failed (exit " + std::to_string(code) + "): " + joined +
                             "\n" + captured.str());
  }
}

std::vector<std::string> relative_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file()) out.push_back(fs::relative(entry.path(), root).string());
  std::sort(out.begin(), out.end());
  return out;
}

void compare_trees(const fs::path& got, const fs::path& want, const std::string& label) {
  require(fs::is_directory(got), label + ": output directory missing");
  require(fs::is_directory(want), label + ": golden directory missing");
  const auto got_files = relative_files(got);
  const auto want_files = relative_files(want);
  if (got_files != want_files) {
    std::ostringstream msg;
    msg << label << ": file sets differ (" << got_files.size() << " produced, "
        << want_files.size() << " golden)";
    throw std::runtime_error(msg.str());
  }
  for (const std::string& name : got_files)
    require(testutil::files_equal(got / name, want / name),
            label + ": bytes differ for " + name);
}

std::string normalized_compare_doc(const fs::path& path) {
  auto doc = nlohmann::json::parse(testutil::read_file(path));
  doc.erase("report_a");  // embeds absolute paths
  doc.erase("report_b");
  return doc.dump(2);
}

void end_to_end_golden_run() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path data = testutil::data_dir();
  const fs::path mini = data / "mini";
  const fs::path golden = data / "golden";
  require(fs::is_directory(mini) && fs::is_directory(golden),
          "checked-in dataset or goldens missing under " + data.string());

  testutil::TempDir tmp("acceptance_pipeline");
  const fs::path split = tmp / "split.json";
  run_cli_or_throw({"split", "--dataset", mini.string(), "--out", split.string(),  //
                    "--train-frac", "0.5", "--seed", "7"});
  require(testutil::files_equal(split, golden / "split.json"), "split.json differs from golden");

  const fs::path prep = tmp / "prep";
  run_cli_or_throw({"preprocess", "--dataset", mini.string(), "--out", prep.string(),  //
                    "--method", "combined", "--size", "32",                            //
                    "--split", split.string(), "--subset", "test"});
  compare_trees(prep / "slices", golden / "prep" / "slices", "preprocess slices");
  compare_trees(prep / "masks", golden / "prep" / "masks", "preprocess masks");
  compare_trees(prep / "prompts", golden / "prep" / "prompts", "preprocess prompts");

  const fs::path eval_out = tmp / "eval";
  run_cli_or_throw({"evaluate", "--dataset", mini.string(),                      //
                    "--split", split.string(), "--subset", "test",               //
                    "--out", eval_out.string(),                                  //
                    "--pred", "dilated=" + (data / "preds_dilated").string(),    //
                    "--pred", "shifted=" + (data / "preds_shifted").string(),    //
                    "--min-pixels", "8"});
  for (const char* name : {"report.json", "table.txt", "table.csv", "scatter.csv"})
    require(testutil::files_equal(eval_out / name, golden / "eval" / name),
            std::string(name) + " differs from golden");

  const fs::path cmp = tmp / "compare.json";
  run_cli_or_throw({"compare", (eval_out / "report.json").string(),
                    (eval_out / "report.json").string(), "--out", cmp.string(),  //
                    "--model-a", "dilated", "--model-b", "shifted"});
  require(normalized_compare_doc(cmp) ==
              nlohmann::json::parse(testutil::read_file(golden / "compare.json")).dump(2),
          "compare.json differs from golden");

  const fs::path render_out = tmp / "render";
  run_cli_or_throw({"render", "--dataset", mini.string(),                      //
                    "--split", split.string(), "--subset", "test",             //
                    "--slices", (prep / "slices").string(),                    //
                    "--out", render_out.string(),                              //
                    "--pred", "dilated=" + (data / "preds_dilated").string(),  //
                    "--roi", "wholetumor", "--min-pixels", "8"});
  compare_trees(render_out, golden / "render", "render overlays");

  // Recompute every record in the produced report with the oracles.
  const EvalReport report = read_report(eval_out / "report.json");
  require(report.records.size() == 96, "expected 96 records, got " +
                                           std::to_string(report.records.size()));
  std::map<CaseId, LabelVolume> labels;
  for (const SliceRecord& rec : report.records) {
    auto it = labels.find(rec.case_id);
    if (it == labels.end())
      it = labels
               .emplace(rec.case_id,
                        to_labels(read_nifti(mini / "labelsTr" / (rec.case_id + ".nii.gz"))))
               .first;
    const fs::path pred_dir =
        data / (rec.model_tag == "dilated" ? "preds_dilated" : "preds_shifted");
    const BinaryMask pred = read_mask_png(pred_dir / mask_png_name(rec.case_id, rec.z, rec.roi));
    BinaryMask gt = extract_roi_mask(it->second, rec.z, rec.roi);
    if (gt.rows() != pred.rows() || gt.cols() != pred.cols())
      gt = resize_nearest(gt, pred.rows(), pred.cols());

    require(rec.rows == pred.rows() && rec.cols == pred.cols(), "record resolution wrong");
    require(rec.dice == oracle::dice(gt, pred),
            "report dice differs from oracle for " + rec.case_id + " z" + std::to_string(rec.z));
    const auto want = oracle::hausdorff(gt, pred, report.spacing);
    require(rec.defined_hd == want.has_value(), "report hd definedness differs from oracle");
    if (want) {
      require(std::abs(rec.hd - want->hd) <= 1e-9, "report hd differs from oracle");
      require(std::abs(rec.hd95 - want->hd95) <= 1e-9, "report hd95 differs from oracle");
    }
  }

  const double dt = seconds_since(t0);
  require(dt < 30.0, "runtime budget blown: " + fmt(dt) + " s >= 30 s");
}

// --------------------------------------------------------------- criterion 10

void table_fixture() {
  const std::vector<SliceRecord> records = mini::table_fixture();
  const std::vector<Roi> rows(kTableRoiOrder.begin(), kTableRoiOrder.end());
  const MeanTable table = aggregate_table(records, rows, {"sam"});

  const std::array<const char*, 4> want = {"0.75", "0.54", "0.67", "0.88"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", table.mean[i][0]);
    require(want[i] == std::string(buf),
            std::string(roi_display(rows[i])) + " mean prints as " + buf + ", expected " +
                want[i]);
  }
  const std::string text = table_to_text(table);
  for (const char* cell : want)
    require(text.find(cell) != std::string::npos,
            std::string("rendered table is missing ") + cell);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> check;
  };
  const std::vector<Criterion> criteria = {
      {"dice/hd/hd95 match brute-force oracles on 10,000 random mask pairs",
       metric_oracle_equivalence},
      {"distance transform matches nearest-true search on 1,000 masks",
       distance_transform_exactness},
      {"metric spot values: dice 0.5, hd = hd95 = 5, identity, disjoint", metric_spot_values},
      {"wilcoxon exact p matches 2^n enumeration; approx agrees near cutover; {+1..+5} p=0.0625",
       wilcoxon_exactness},
      {"pca: eigen residual < 1e-8, trace identity, rank-3 reconstruction, equal-input zeros",
       pca_properties},
      {"augmentation: bit-identical reruns and thread counts, angle bounds, exact identities",
       augmentation_determinism},
      {"nifti round-trip across all datatypes and endiannesses, decathlon-shaped header",
       nifti_round_trip},
      {"slice filter: (300,100,400) vs threshold 250 under all_rois and target_roi",
       filter_rule},
      {"end-to-end pipeline reproduces checked-in goldens and oracle recomputation",
       end_to_end_golden_run},
      {"table fixture renders 0.75/0.54/0.67/0.88 to two decimals", table_fixture},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criterion.check();
      std::printf("PASS - %s (%.1f s)\n", criterion.name, seconds_since(t0));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL - %s: %s\n", criterion.name, e.what());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
