#include "antoine/antoine.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "antoine/dynamics.hpp"
#include "antoine/error.hpp"
#include "antoine/necklace.hpp"
#include "antoine/report_io.hpp"

struct antoine_necklace {
  antoine::Necklace necklace;
};

namespace {

thread_local std::string g_last_error;

antoine_status status_of(antoine::ErrorKind kind) {
  using antoine::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return ANTOINE_ERR_INVALID_ARGUMENT;
    case ErrorKind::InvalidMultiplicity: return ANTOINE_ERR_INVALID_MULTIPLICITY;
    case ErrorKind::NoUniqueFixedPoint: return ANTOINE_ERR_NO_UNIQUE_FIXED_POINT;
    case ErrorKind::MultipleChildren: return ANTOINE_ERR_MULTIPLE_CHILDREN;
    case ErrorKind::MinSeparationTooSmall: return ANTOINE_ERR_MIN_SEPARATION;
    case ErrorKind::NoGenericProjection: return ANTOINE_ERR_NO_GENERIC_PROJECTION;
    case ErrorKind::UndefinedAtOrigin: return ANTOINE_ERR_UNDEFINED_AT_ORIGIN;
    case ErrorKind::NonInvertibleJacobian: return ANTOINE_ERR_NON_INVERTIBLE_JACOBIAN;
    case ErrorKind::DegenerateFit: return ANTOINE_ERR_DEGENERATE_FIT;
    case ErrorKind::TooManyTori: return ANTOINE_ERR_TOO_MANY_TORI;
    case ErrorKind::SearchLimit: return ANTOINE_ERR_SEARCH_LIMIT;
    case ErrorKind::Io: return ANTOINE_ERR_IO;
  }
  return ANTOINE_ERR_INTERNAL;
}

template <class F>
antoine_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return ANTOINE_OK;
  } catch (const antoine::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ANTOINE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ANTOINE_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw antoine::Error(antoine::ErrorKind::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

antoine::Vec3 vec(const double p[3]) { return {p[0], p[1], p[2]}; }

}  // namespace

extern "C" {

const char* antoine_status_string(antoine_status status) {
  switch (status) {
    case ANTOINE_OK: return "ok";
    case ANTOINE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ANTOINE_ERR_INVALID_MULTIPLICITY: return "invalid multiplicity";
    case ANTOINE_ERR_NO_UNIQUE_FIXED_POINT: return "no unique fixed point";
    case ANTOINE_ERR_MULTIPLE_CHILDREN: return "multiple children contain the point";
    case ANTOINE_ERR_MIN_SEPARATION: return "curves nearly touch";
    case ANTOINE_ERR_NO_GENERIC_PROJECTION: return "no generic projection";
    case ANTOINE_ERR_UNDEFINED_AT_ORIGIN: return "undefined at origin";
    case ANTOINE_ERR_NON_INVERTIBLE_JACOBIAN: return "non-invertible Jacobian";
    case ANTOINE_ERR_DEGENERATE_FIT: return "degenerate fit";
    case ANTOINE_ERR_TOO_MANY_TORI: return "too many tori";
    case ANTOINE_ERR_SEARCH_LIMIT: return "search limit exceeded";
    case ANTOINE_ERR_IO: return "i/o error";
    case ANTOINE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* antoine_last_error(void) { return g_last_error.c_str(); }

void antoine_string_free(char* s) { delete[] s; }

int antoine_default_multiplicity(void) { return antoine::kMinimalMultiplicity; }

antoine_status antoine_necklace_create(int m, antoine_necklace** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    *out = new antoine_necklace{antoine::build_necklace(m)};
  });
}

void antoine_necklace_destroy(antoine_necklace* necklace) { delete necklace; }

int antoine_necklace_multiplicity(const antoine_necklace* necklace) { return necklace ? necklace->necklace.m : 0; }

antoine_status antoine_necklace_json(const antoine_necklace* necklace, char** out_json) {
  return guarded([&] {
    require(necklace && out_json, "null argument");
    *out_json = dup_string(antoine::necklace_json(necklace->necklace).dump(2));
  });
}

antoine_status antoine_validate(const antoine_necklace* necklace, int poly_n, int quad_n, uint64_t seed,
                                int* out_pass, char** out_json) {
  return guarded([&] {
    require(necklace && out_pass && out_json, "null argument");
    antoine::ValidationOptions opts;
    if (poly_n > 0) opts.poly_n = poly_n;
    if (quad_n > 0) opts.quad_n = quad_n;
    opts.seed = seed;
    const antoine::ValidationReport report = antoine::validate(necklace->necklace, opts);
    antoine::Json doc;
    doc["validation"] = antoine::to_json(report);
    doc["link_matrix"] = report.links ? antoine::to_json(*report.links) : antoine::Json();
    *out_pass = report.pass() ? 1 : 0;
    *out_json = dup_string(doc.dump(2));
  });
}

antoine_status antoine_minimal_multiplicity(int max_m, int* out_m) {
  return guarded([&] {
    require(out_m != nullptr, "null argument");
    *out_m = antoine::minimal_valid_multiplicity(max_m).value_or(0);
  });
}

antoine_status antoine_escape_depth(const antoine_necklace* necklace, const double point[3], int budget,
                                    antoine_escape* out) {
  return guarded([&] {
    require(necklace && point && out, "null argument");
    const antoine::EscapeOutcome e = antoine::escape_depth(necklace->necklace, vec(point), budget);
    out->kind = static_cast<antoine_escape_kind>(e.kind);
    out->depth = e.depth;
  });
}

antoine_status antoine_export_volume(const antoine_necklace* necklace, const int dims[3], const double bbox[6],
                                     int budget, uint64_t seed, const char* path) {
  return guarded([&] {
    require(necklace && dims && bbox && path, "null argument");
    antoine::Box3 box{{bbox[0], bbox[1], bbox[2]}, {bbox[3], bbox[4], bbox[5]}};
    antoine::export_volume(necklace->necklace, {dims[0], dims[1], dims[2]}, box, budget, seed, path);
  });
}

antoine_status antoine_export_mesh(const antoine_necklace* necklace, int stage, int nu, int nv,
                                   antoine_mesh_format format, const char* path) {
  return guarded([&] {
    require(necklace && path, "null argument");
    antoine::export_mesh(necklace->necklace, stage, nu, nv,
                         format == ANTOINE_MESH_PLY ? antoine::MeshFormat::Ply : antoine::MeshFormat::Obj, path);
  });
}

antoine_status antoine_export_points(const antoine_necklace* necklace, size_t count, int depth, uint64_t seed,
                                     antoine_point_format format, const char* path) {
  return guarded([&] {
    require(necklace && path, "null argument");
    const auto pts = antoine::chaos_game_sample(necklace->necklace, count, depth, seed);
    antoine::Json params;
    params["format"] = format == ANTOINE_POINTS_CSV ? "csv" : "xyz";
    params["generator"] = "chaos_game_sample";
    params["m"] = necklace->necklace.m;
    params["count"] = count;
    params["depth"] = depth;
    params["seed"] = seed;
    params["basepoint"] = antoine::to_json(antoine::chaos_basepoint(necklace->necklace));
    antoine::export_points(pts, format == ANTOINE_POINTS_CSV ? antoine::PointFormat::Csv : antoine::PointFormat::Xyz,
                           params, path);
  });
}

antoine_status antoine_periodic_json(const antoine_necklace* necklace, int p_max, size_t cap, uint64_t seed,
                                     char** out_json) {
  return guarded([&] {
    require(necklace && out_json, "null argument");
    const antoine::Necklace& n = necklace->necklace;
    const auto points = antoine::enumerate_periodic(n, p_max, cap, seed);
    antoine::Json doc;
    doc["m"] = n.m;
    doc["p_max"] = p_max;
    doc["cap"] = cap;
    doc["seed"] = seed;
    doc["orbits"] = points.size();
    double worst = 0.0;
    antoine::Json list = antoine::Json::array();
    for (const auto& pp : points) {
      antoine::Json j = antoine::to_json(pp);
      const antoine::Vec3 back = antoine::inner_steps_map(n, pp.period)(pp.point);
      const double residual = antoine::distance(back, pp.point);
      worst = std::max(worst, residual);
      j["return_residual"] = residual;
      list.push_back(std::move(j));
    }
    doc["max_return_residual"] = worst;
    doc["points"] = std::move(list);
    *out_json = dup_string(doc.dump(2));
  });
}

antoine_status antoine_dimension_json(const antoine_necklace* necklace, size_t count, int depth, uint64_t seed,
                                      char** out_json) {
  return guarded([&] {
    require(necklace && out_json, "null argument");
    const antoine::Necklace& n = necklace->necklace;
    const auto pts = antoine::chaos_game_sample(n, count, depth, seed);
    const auto scales = antoine::default_box_scales(n);
    antoine::Json doc;
    doc["m"] = n.m;
    doc["count"] = count;
    doc["depth"] = depth;
    doc["seed"] = seed;
    doc["scales"] = scales;
    doc["similarity_dimension"] = antoine::similarity_dimension(n.m);
    doc["box_dimension"] = antoine::box_dimension_estimate(pts, scales);
    *out_json = dup_string(doc.dump(2));
  });
}

antoine_status antoine_orbit_json(const antoine_necklace* necklace, const double point[3], int d, int max_iter,
                                  int budget, char** out_json) {
  return guarded([&] {
    require(necklace && point && out_json, "null argument");
    const antoine::Necklace& n = necklace->necklace;
    const antoine::Vec3 p = vec(point);
    antoine::Json doc;
    doc["m"] = n.m;
    doc["point"] = antoine::to_json(p);
    doc["exterior_model_degree"] = d;
    doc["max_iter"] = max_iter;
    doc["escape"] = antoine::to_json(antoine::escape_depth(n, p, budget));
    doc["orbit"] = antoine::to_json(antoine::orbit(n, antoine::ExteriorModel{d}, p, max_iter));
    *out_json = dup_string(doc.dump(2));
  });
}

}  // extern "C"
