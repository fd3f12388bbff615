/* Finite volume solver generated by shockcert. Do not edit. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "solver.h"

/* Time step: per-cell wave speed and CFL step. */
static void k_max_speed(const double *sc_in, double *sc_out) {
  (void)sc_in;
  const double a = SC_PARAM_a;
  const double sc_s0 = fabs(a);
  const double sc_amax = sc_s0;
  sc_out[0] = sc_amax;
}
static void k_time_step(const double *sc_in, double *sc_out) {
  (void)sc_in;
  const double sc_amax = sc_in[0];
  const double sc_dx = sc_in[1];
  const double sc_dtnext = ((0.90000000000000002 * sc_dx) / sc_amax);
  sc_out[0] = sc_dtnext;
}

/* Numerical and physical flux. */
static void k_numerical_flux(const double *sc_in, double *sc_out) {
  (void)sc_in;
  const double a = SC_PARAM_a;
  const double u_L = sc_in[0];
  const double u_R = sc_in[1];
  const double sc_dt = sc_in[2];
  const double sc_dx = sc_in[3];
  const double sc_fL0 = (a * u_L);
  const double sc_fR0 = (a * u_R);
  const double sc_F0 = ((0.5 * (sc_fL0 + sc_fR0)) - ((sc_dx / (2.0 * sc_dt)) * (u_R - u_L)));
  sc_out[0] = sc_F0;
}

/* Conservative update. */
static void k_update(const double *sc_in, double *sc_out) {
  (void)sc_in;
  const double sc_u = sc_in[0];
  const double sc_Fm = sc_in[1];
  const double sc_Fp = sc_in[2];
  const double sc_dt = sc_in[3];
  const double sc_dx = sc_in[4];
  const double sc_unew = (sc_u - ((sc_dt / sc_dx) * (sc_Fp - sc_Fm)));
  sc_out[0] = sc_unew;
}

/* Reconstruction. */
/* first order: piecewise constant */

#define SC_EXT (SC_CELLS + 2 * SC_GHOSTS)

static double sc_state[SC_CELLS * SC_NVARS];
static double sc_ext[SC_EXT * SC_NVARS];
static double sc_left[(SC_CELLS + 1) * SC_NVARS];
static double sc_right[(SC_CELLS + 1) * SC_NVARS];
static double sc_flux[(SC_CELLS + 1) * SC_NVARS];
#if SC_ORDER == 2
static double sc_lo[SC_EXT * SC_NVARS];
static double sc_hi[SC_EXT * SC_NVARS];
#endif

static double sc_grid_dx(void) { return (SC_XHI - SC_XLO) / (double)SC_CELLS; }

static double sc_max_speed(void) {
  double amax = 0.0;
  for (long i = 0; i < SC_CELLS; ++i) {
    double a;
    k_max_speed(&sc_state[i * SC_NVARS], &a);
    amax = fmax(amax, a);
  }
  return amax;
}

static void sc_advance(double dt) {
  const long n = SC_CELLS, g = SC_GHOSTS, m = SC_EXT, nv = SC_NVARS;
  const double dx = sc_grid_dx();
  for (long i = 0; i < m; ++i) {
    long k = i - g, src;
    if (SC_PERIODIC) {
      src = ((k % n) + n) % n;
    } else {
      src = k < 0 ? 0 : (k > n - 1 ? n - 1 : k);
    }
    memcpy(&sc_ext[i * nv], &sc_state[src * nv], sizeof(double) * (size_t)nv);
  }
#if SC_ORDER == 1
  for (long j = 0; j <= n; ++j) {
    memcpy(&sc_left[j * nv], &sc_ext[(g - 1 + j) * nv], sizeof(double) * (size_t)nv);
    memcpy(&sc_right[j * nv], &sc_ext[(g + j) * nv], sizeof(double) * (size_t)nv);
  }
#else
  for (long c = g - 1; c <= g + n; ++c) {
    double flo[SC_NVARS], fhi[SC_NVARS];
    for (long v = 0; v < nv; ++v) {
      double sv[3], slope, fin[2], fo[2];
      sv[0] = sc_ext[(c - 1) * nv + v];
      sv[1] = sc_ext[c * nv + v];
      sv[2] = sc_ext[(c + 1) * nv + v];
      k_slope(sv, &slope);
      fin[0] = sc_ext[c * nv + v];
      fin[1] = slope;
      k_faces(fin, fo);
      sc_lo[c * nv + v] = fo[0];
      sc_hi[c * nv + v] = fo[1];
    }
    k_physical_flux(&sc_lo[c * nv], flo);
    k_physical_flux(&sc_hi[c * nv], fhi);
    for (long v = 0; v < nv; ++v) {
      double a[5], b[5];
      a[0] = sc_lo[c * nv + v]; a[1] = flo[v]; a[2] = fhi[v]; a[3] = dt; a[4] = dx;
      b[0] = sc_hi[c * nv + v]; b[1] = flo[v]; b[2] = fhi[v]; b[3] = dt; b[4] = dx;
      k_half_step(a, &sc_lo[c * nv + v]);
      k_half_step(b, &sc_hi[c * nv + v]);
    }
  }
  for (long j = 0; j <= n; ++j) {
    memcpy(&sc_left[j * nv], &sc_hi[(g - 1 + j) * nv], sizeof(double) * (size_t)nv);
    memcpy(&sc_right[j * nv], &sc_lo[(g + j) * nv], sizeof(double) * (size_t)nv);
  }
#endif
  for (long j = 0; j <= n; ++j) {
    double in[2 * SC_NVARS + 2];
    for (long v = 0; v < nv; ++v) {
      in[v] = sc_left[j * nv + v];
      in[nv + v] = sc_right[j * nv + v];
    }
    in[2 * nv] = dt;
    in[2 * nv + 1] = dx;
    k_numerical_flux(in, &sc_flux[j * nv]);
  }
  for (long i = 0; i < n; ++i) {
    for (long v = 0; v < nv; ++v) {
      double a[5];
      a[0] = sc_state[i * nv + v]; a[1] = sc_flux[i * nv + v]; a[2] = sc_flux[(i + 1) * nv + v];
      a[3] = dt; a[4] = dx;
      k_update(a, &sc_state[i * nv + v]);
    }
  }
}

static int sc_finite_state(void) {
  for (long i = 0; i < SC_CELLS * SC_NVARS; ++i)
    if (!isfinite(sc_state[i])) return 0;
  return 1;
}

static int sc_read_dump(const char *path) {
  FILE *f = fopen(path, "r");
  char line[8192];
  long cells = -1;
  if (!f) {
    fprintf(stderr, "ParseError: cannot open %s\n", path);
    return 0;
  }
  if (!fgets(line, sizeof line, f) || strncmp(line, "# ", 2) != 0) {
    fprintf(stderr, "ParseError: line 1: missing dump header\n");
    fclose(f);
    return 0;
  }
  {
    const char *p = strstr(line, " cells=");
    if (p) cells = strtol(p + 7, NULL, 10);
  }
  if (cells != SC_CELLS) {
    fprintf(stderr, "ValidationError: dump has %ld cells, solver expects %d\n", cells, SC_CELLS);
    fclose(f);
    return 0;
  }
  for (long i = 0; i < SC_CELLS; ++i) {
    char *p, *end;
    if (!fgets(line, sizeof line, f)) {
      fprintf(stderr, "ParseError: line %ld: missing row\n", i + 2);
      fclose(f);
      return 0;
    }
    p = line;
    if (strtol(p, &end, 10) != i || *end != ',') goto bad;
    p = end + 1;
    strtod(p, &end);
    if (end == p || *end != ',') goto bad;
    p = end + 1;
    for (long v = 0; v < SC_NVARS; ++v) {
      sc_state[i * SC_NVARS + v] = strtod(p, &end);
      if (end == p || (v + 1 < SC_NVARS && *end != ',')) goto bad;
      p = end + 1;
    }
    if (*end != '\n' && *end != '\0' && *end != '\r') goto bad;
    continue;
  bad:
    fprintf(stderr, "ParseError: line %ld: malformed row\n", i + 2);
    fclose(f);
    return 0;
  }
  fclose(f);
  return 1;
}

static int sc_write_dump(const char *path, double t, long step) {
  FILE *f = fopen(path, "w");
  const double dx = sc_grid_dx();
  if (!f) {
    fprintf(stderr, "ValidationError: cannot write %s\n", path);
    return 0;
  }
  fprintf(f, "# system=%s cells=%d t=%.17g step=%ld\n", SC_SYSTEM_NAME, SC_CELLS, t, step);
  for (long i = 0; i < SC_CELLS; ++i) {
    fprintf(f, "%ld,%.17g", i, SC_XLO + ((double)i + 0.5) * dx);
    for (long v = 0; v < SC_NVARS; ++v) fprintf(f, ",%.17g", sc_state[i * SC_NVARS + v]);
    fputc('\n', f);
  }
  return fclose(f) == 0;
}

int main(int argc, char **argv) {
  double t = 0.0, t_end;
  long step = 0, cadence = 0;
  char *end;
  if (argc < 4 || argc > 5) {
    fprintf(stderr, "usage: %s <initial-dump> <t-end> <final-dump> [cadence]\n", argv[0]);
    return 1;
  }
  t_end = strtod(argv[2], &end);
  if (*end != '\0' || !(t_end > 0.0) || !isfinite(t_end)) {
    fprintf(stderr, "ValidationError: t-end must be a positive number\n");
    return 1;
  }
  if (argc == 5) {
    cadence = strtol(argv[4], &end, 10);
    if (*end != '\0' || cadence < 0) {
      fprintf(stderr, "ValidationError: cadence must be a non-negative integer\n");
      return 1;
    }
  }
  if (!sc_read_dump(argv[1])) return 1;
  if (!sc_finite_state()) {
    fprintf(stderr, "NonFiniteState: step 0\n");
    return 3;
  }
  while (t < t_end) {
    double amax = sc_max_speed(), dt, in[2];
    int last;
    if (!isfinite(amax)) {
      fprintf(stderr, "NonFiniteState: step %ld: max speed\n", step);
      return 3;
    }
    in[0] = amax;
    in[1] = sc_grid_dx();
    k_time_step(in, &dt);
    last = !(dt < t_end - t);
    if (last) dt = t_end - t;
    sc_advance(dt);
    ++step;
    t = last ? t_end : t + dt;
    if (!sc_finite_state()) {
      fprintf(stderr, "NonFiniteState: step %ld\n", step);
      return 3;
    }
    if (cadence > 0 && step % cadence == 0) {
      char snap[4096];
      snprintf(snap, sizeof snap, "%s.%ld", argv[3], step);
      if (!sc_write_dump(snap, t, step)) return 1;
    }
  }
  return sc_write_dump(argv[3], t, step) ? 0 : 1;
}
