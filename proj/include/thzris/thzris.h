/* SPDX-License-Identifier: Apache-2.0
 *
 * thzris - wideband THz hybrid beamforming with double-layer true-time delays
 * Copyright (C) 2026 thzris developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------ */

#ifndef THZRIS_THZRIS_H
#define THZRIS_THZRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(THZRIS_BUILDING_LIBRARY)
#define THZ_API __attribute__((visibility("default")))
#else
#define THZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. CONFIG and NUMERIC match the CLI exit codes 1 and 2. */
typedef enum thz_status
{
    THZ_OK = 0,
    THZ_ERR_CONFIG = 1,   /* invalid configuration or arguments */
    THZ_ERR_NUMERIC = 2,  /* a computation could not produce a finite result */
    THZ_ERR_IO = 3,       /* output could not be written */
    THZ_ERR_INTERNAL = 4
} thz_status;

/* Library version, e.g. "0.3.0". */
THZ_API const char *thz_version(void);

/* Message of the last failing call on this thread; empty string if none. */
THZ_API const char *thz_last_error(void);

/* ---- system parameters ------------------------------------------------ */

typedef struct thz_system thz_system;

/* Reference configuration: 300 GHz carrier, 30 GHz band, 8 subcarriers, 128 antennas,
 * 4 RF chains, 4 users, 4 RISs of 4x4 elements, 10 dBm, -85 dBm noise. */
THZ_API thz_status thz_system_create(thz_system **out);
THZ_API void thz_system_destroy(thz_system *sys);

/* Reads the [system] section of an experiment spec file over the reference configuration. */
THZ_API thz_status thz_system_load(const char *path, thz_system **out);

/* Keys: f_c, B, M, N, N_RF, K, R, M_x, M_y, P_max_dBm, P_max_W, sigma2_dBm, sigma2_W, d_spacing.
 * Integer keys reject non-integral values. */
THZ_API thz_status thz_system_set(thz_system *sys, const char *key, double value);
THZ_API thz_status thz_system_get(const thz_system *sys, const char *key, double *value);

/* ---- analog architectures --------------------------------------------- */

typedef struct thz_arch thz_arch;

/* Descriptor: "ps", "single_ttd(U=32,P_s=8)" or "double_ttd(K_H=8,K_L=4,P_H=8,P_L=4)".
 * Optional items: D_over_Tc=<number>|continuous (default continuous) and ps_bits=<b>. */
THZ_API thz_status thz_arch_create(const char *descriptor, thz_arch **out);
THZ_API void thz_arch_destroy(thz_arch *arch);
/* Writes a short label such as "double_ttd(8,4)"; fails if `len` is too small. */
THZ_API thz_status thz_arch_label(const thz_arch *arch, char *buf, size_t len);

/* ---- analysis --------------------------------------------------------- */

/* Normalized array gain of one chain steered to theta0 (rad), evaluated at freq_hz. */
THZ_API thz_status thz_gain(const thz_system *sys, const thz_arch *arch, double theta0, double freq_hz,
                            double *gain);
/* Dirichlet-sinc closed form of the same gain (continuous delays). */
THZ_API thz_status thz_gain_closed_form(const thz_system *sys, const thz_arch *arch, double theta0,
                                        double freq_hz, double *gain);

/* Direction a frequency-flat phase-shifter beam actually points to at freq_hz. */
THZ_API thz_status thz_split_direction(const thz_system *sys, double theta0, double freq_hz, double *theta);

typedef struct thz_bits
{
    int delay_needed;      /* 0 when sin(theta0) == 0 */
    int max_ps_group;      /* largest PS subarray that stays within one carrier period */
    int first_layer_bits;  /* small-range TTD bits */
    int second_layer_bits; /* large-range TTD bits */
    int single_layer_bits;
} thz_bits;

/* Minimum TTD bits for a delay step of one carrier period. */
THZ_API thz_status thz_required_bits(const thz_system *sys, double theta0, int K_H, int K_L, int U,
                                     thz_bits *out);
/* (K_H P_H + K_H K_L P_L) / (U P_s). */
THZ_API thz_status thz_bit_ratio(int K_H, int P_H, int K_L, int P_L, int U, int P_s, double *eta);

typedef struct thz_hardware
{
    int large_ttds;
    int total_ttds;
    int total_bits;
    int layers;              /* number of valid entries in max_delay_tc */
    double max_delay_tc[2];  /* [0, max] delay range per layer in carrier periods, large-range first */
} thz_hardware;

THZ_API thz_status thz_hardware_report(const thz_system *sys, const thz_arch *arch, thz_hardware *out);

/* ---- experiments ------------------------------------------------------ */

typedef struct thz_experiment thz_experiment;

THZ_API thz_status thz_experiment_load(const char *path, thz_experiment **out);
THZ_API void thz_experiment_destroy(thz_experiment *exp);
THZ_API thz_status thz_experiment_set_seed(thz_experiment *exp, uint64_t seed);
THZ_API thz_status thz_experiment_set_trials(thz_experiment *exp, int trials);
THZ_API thz_status thz_experiment_set_output(thz_experiment *exp, const char *dir);
THZ_API thz_status thz_experiment_set_threads(thz_experiment *exp, int threads);
/* Runs the experiment and writes <dir>/<id>.csv and <dir>/<id>.json. */
THZ_API thz_status thz_experiment_run(thz_experiment *exp);
/* Path of the CSV written by the last successful run. */
THZ_API thz_status thz_experiment_output(const thz_experiment *exp, char *buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif
