/* tslint:disable */
/* eslint-disable */

/**
 * Two random vectors with popcount `c` sharing `shared` ones, and their
 * cosine distance computed three ways.
 */
export function cosine_counter(c: number, shared: number, seed: bigint): string;

/**
 * Tokens of a raw email and how far each gets through the word filters.
 */
export function lex_preview(text: string): string;

/**
 * Builds features for a synthetic corpus and evaluates them with
 * leave-one-out KNN.
 */
export function simulate(seed: bigint, labels: number, per_label: number, top_k: number, min_doc_count: number, min_top_appearances: number, k: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cosine_counter: (a: number, b: number, c: bigint) => [number, number];
    readonly lex_preview: (a: number, b: number) => [number, number];
    readonly simulate: (a: bigint, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
