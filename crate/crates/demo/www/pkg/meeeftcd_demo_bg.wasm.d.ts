/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const cosine_counter: (a: number, b: number, c: bigint) => [number, number];
export const lex_preview: (a: number, b: number) => [number, number];
export const simulate: (a: bigint, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
