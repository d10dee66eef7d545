/* tslint:disable */
/* eslint-disable */

export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `arccos(delta cos k + gamma)` on the same grid.
     */
    readonly exact: Float64Array;
    readonly k: Float64Array;
    readonly max_error: number;
    /**
     * Upper eigenphase branch from diagonalising `A(k)`.
     */
    readonly omega: Float64Array;
}

export class Distribution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Rotation exponents `n` of the sites `a^n r^eps`.
     */
    readonly positions: Float64Array;
    /**
     * Probability at each position, both cosets summed.
     */
    readonly probabilities: Float64Array;
    /**
     * `[re, im]` pairs of the walk scalars in the order a, a_inv, b, c, d, e.
     */
    readonly scalars: Float64Array;
}

export class Probe {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `[theta + theta', nu, mu, residual]`, empty when outside the class.
     */
    readonly canonical: Float64Array;
    readonly in_class: boolean;
    readonly message: string;
    readonly parity_found: boolean;
    readonly parity_residual: number;
}

export function dispersion_curve(delta: number, gamma: number, samples: number): Curve;

export function evolve_family(_case: string, p: number, q: number, mu: number, s1: number, s2: number, s3: number, steps: number): Distribution;

export function probe_family(_case: string, p: number, q: number, mu: number, s1: number, s2: number, s3: number): Probe;

export function probe_hadamard(): Probe;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_distribution_free: (a: number, b: number) => void;
    readonly __wbg_probe_free: (a: number, b: number) => void;
    readonly curve_exact: (a: number) => [number, number];
    readonly curve_k: (a: number) => [number, number];
    readonly curve_max_error: (a: number) => number;
    readonly curve_omega: (a: number) => [number, number];
    readonly dispersion_curve: (a: number, b: number, c: number) => [number, number, number];
    readonly distribution_positions: (a: number) => [number, number];
    readonly distribution_probabilities: (a: number) => [number, number];
    readonly distribution_scalars: (a: number) => [number, number];
    readonly evolve_family: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly probe_canonical: (a: number) => [number, number];
    readonly probe_family: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly probe_hadamard: () => [number, number, number];
    readonly probe_in_class: (a: number) => number;
    readonly probe_message: (a: number) => [number, number];
    readonly probe_parity_found: (a: number) => number;
    readonly probe_parity_residual: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
