/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_distribution_free: (a: number, b: number) => void;
export const __wbg_probe_free: (a: number, b: number) => void;
export const curve_exact: (a: number) => [number, number];
export const curve_k: (a: number) => [number, number];
export const curve_max_error: (a: number) => number;
export const curve_omega: (a: number) => [number, number];
export const dispersion_curve: (a: number, b: number, c: number) => [number, number, number];
export const distribution_positions: (a: number) => [number, number];
export const distribution_probabilities: (a: number) => [number, number];
export const distribution_scalars: (a: number) => [number, number];
export const evolve_family: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const probe_canonical: (a: number) => [number, number];
export const probe_family: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const probe_hadamard: () => [number, number, number];
export const probe_in_class: (a: number) => number;
export const probe_message: (a: number) => [number, number];
export const probe_parity_found: (a: number) => number;
export const probe_parity_residual: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
