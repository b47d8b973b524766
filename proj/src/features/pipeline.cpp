#include "clsvm/features/pipeline.hpp"

#include "clsvm/core/error.hpp"
#include "clsvm/features/gabor.hpp"
#include "clsvm/features/hog.hpp"
#include "clsvm/features/lbp.hpp"

namespace clsvm::features {

namespace {

template <class Get>
Matrix stack_rows(const std::vector<ImageDescriptors>& training, Get get) {
  const auto rows = static_cast<Eigen::Index>(training.size() * kBoxCount);
  const Eigen::Index cols = get(training.front()[0]).size();
  Matrix out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& image : training) {
    for (const auto& box : image) {
      const Vector& v = get(box);
      if (v.size() != cols) throw SchemaError("fit_pca_set: inconsistent descriptor length");
      out.row(r++) = v.transpose();
    }
  }
  return out;
}

}  // namespace

RawDescriptors describe_patch(const Image& patch) {
  return {GaborBank::shared().pooled(patch), hog_features(patch), lbp_histogram(patch)};
}

ImageDescriptors describe_image(const Image& image, const Rect& face_box) {
  const auto patches = extract_boxes(image, face_box);
  ImageDescriptors out;
  for (std::size_t i = 0; i < kBoxCount; ++i) out[i] = describe_patch(patches[i]);
  return out;
}

PcaSet fit_pca_set(const std::vector<ImageDescriptors>& training, const PcaDims& dims) {
  if (training.empty()) throw ValidationError("fit_pca_set: no training images");
  PcaSet set;
  set.gabor = numerics::fit_pca(stack_rows(training, [](const RawDescriptors& d) -> const Vector& { return d.gabor; }), dims.gabor);
  set.hog = numerics::fit_pca(stack_rows(training, [](const RawDescriptors& d) -> const Vector& { return d.hog; }), dims.hog);
  set.lbp = numerics::fit_pca(stack_rows(training, [](const RawDescriptors& d) -> const Vector& { return d.lbp; }), dims.lbp);
  return set;
}

Vector reduce_and_concat(const ImageDescriptors& descriptors, const PcaSet& pca) {
  Vector x(static_cast<Eigen::Index>(pca.output_dim()));
  Eigen::Index pos = 0;
  auto put = [&](const numerics::PcaProjection& p, const Vector& v) {
    const Vector c = p.project(v);
    x.segment(pos, c.size()) = c;
    pos += c.size();
  };
  for (const auto& box : descriptors) {
    put(pca.gabor, box.gabor);
    put(pca.hog, box.hog);
    put(pca.lbp, box.lbp);
  }
  return x;
}

Json pca_set_to_json(const PcaSet& pca) {
  return {{"format", "clsvm-pca-set"},
          {"version", 1},
          {"gabor", numerics::pca_to_json(pca.gabor)},
          {"hog", numerics::pca_to_json(pca.hog)},
          {"lbp", numerics::pca_to_json(pca.lbp)}};
}

PcaSet pca_set_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string()) != "clsvm-pca-set") {
    throw SchemaError("not a clsvm PCA set document");
  }
  try {
    return {numerics::pca_from_json(j.at("gabor")), numerics::pca_from_json(j.at("hog")),
            numerics::pca_from_json(j.at("lbp"))};
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("PCA set: ") + e.what());
  }
}

}  // namespace clsvm::features
