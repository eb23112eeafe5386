/* tslint:disable */
/* eslint-disable */

/**
 * Stopping cubes at `height` for shift index `shift` (0..=3), flattened as
 * `[x, y, side, average, ...]`. The root level is raised until admissible.
 */
export function cz_cubes(n: number, height: number, shift: number): Float64Array;

/**
 * Cells of the CZ density, row-major from the bottom row.
 */
export function cz_density_values(n: number): Float64Array;

/**
 * Covering cube of `[x, x+side) × [y, y+side)` from the one-third trick, as
 * `[shift_x, shift_y, corner_x, corner_y, side]`.
 */
export function one_third_cover(x: number, y: number, side: number): Float64Array;

/**
 * `|T f|` on the demo grid, row-major from the bottom row, where `f` is the
 * indicator of the disk of radius `0.45` at `0.15 + 0.1i`.
 *
 * `op` is one of `cauchy`, `commutator`, `riesz`, `maxfn`; `symbol` uses
 * the descriptor syntax (`re`, `z`, `abspow:0.5`, `logabs`, ...) and is
 * read by the commutator only; `alpha` is the Riesz / maximal order.
 */
export function operator_field(op: string, symbol: string, n: number, alpha: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cz_cubes: (a: number, b: number, c: number) => [number, number, number, number];
    readonly cz_density_values: (a: number) => [number, number, number, number];
    readonly one_third_cover: (a: number, b: number, c: number) => [number, number, number, number];
    readonly operator_field: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
