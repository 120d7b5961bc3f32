export class CoaDemo {
    static __wrap(ptr) {
        const obj = Object.create(CoaDemo.prototype);
        obj.__wbg_ptr = ptr;
        CoaDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        CoaDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_coademo_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get correct() {
        const ret = wasm.coademo_correct(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get correct_rate() {
        const ret = wasm.coademo_correct_rate(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get patterns() {
        const ret = wasm.coademo_patterns(this.__wbg_ptr);
        return ret >>> 0;
    }
}
if (Symbol.dispose) CoaDemo.prototype[Symbol.dispose] = CoaDemo.prototype.free;

export class DecryptDemo {
    static __wrap(ptr) {
        const obj = Object.create(DecryptDemo.prototype);
        obj.__wbg_ptr = ptr;
        DecryptDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DecryptDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_decryptdemo_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get original() {
        const ret = wasm.decryptdemo_original(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get psnr_right() {
        const ret = wasm.decryptdemo_psnr_right(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get psnr_wrong() {
        const ret = wasm.decryptdemo_psnr_wrong(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    get right() {
        const ret = wasm.decryptdemo_right(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get width() {
        const ret = wasm.decryptdemo_width(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {Float64Array}
     */
    get wrong() {
        const ret = wasm.decryptdemo_wrong(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) DecryptDemo.prototype[Symbol.dispose] = DecryptDemo.prototype.free;

export class KpaDemo {
    static __wrap(ptr) {
        const obj = Object.create(KpaDemo.prototype);
        obj.__wbg_ptr = ptr;
        KpaDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        KpaDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_kpademo_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get correct_rate() {
        const ret = wasm.kpademo_correct_rate(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    get recovered_pattern() {
        const ret = wasm.kpademo_recovered_pattern(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get true_pattern() {
        const ret = wasm.kpademo_true_pattern(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get width() {
        const ret = wasm.kpademo_width(this.__wbg_ptr);
        return ret >>> 0;
    }
}
if (Symbol.dispose) KpaDemo.prototype[Symbol.dispose] = KpaDemo.prototype.free;

/**
 * Ciphertext-only attack on a Type II order. Exemplars come from the same
 * smooth-image category as the secret plaintexts, or from uniform noise.
 * @param {number} width
 * @param {number} patterns
 * @param {number} samples
 * @param {boolean} same_category
 * @param {number} seed
 * @returns {CoaDemo}
 */
export function coa_demo(width, patterns, samples, same_category, seed) {
    const ret = wasm.coa_demo(width, patterns, samples, same_category, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return CoaDemo.__wrap(ret[0]);
}

/**
 * Encrypts one synthetic image and decrypts it with the right key and with
 * an unrelated one.
 * @param {number} width
 * @param {number} sampling_ratio
 * @param {number} tv_weight
 * @param {number} seed
 * @returns {DecryptDemo}
 */
export function decrypt_demo(width, sampling_ratio, tv_weight, seed) {
    const ret = wasm.decrypt_demo(width, sampling_ratio, tv_weight, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return DecryptDemo.__wrap(ret[0]);
}

/**
 * Known-plaintext attack on a Type I key from `pairs` synthetic plaintexts.
 * @param {number} width
 * @param {number} patterns
 * @param {number} pairs
 * @param {number} seed
 * @returns {KpaDemo}
 */
export function kpa_demo(width, patterns, pairs, seed) {
    const ret = wasm.kpa_demo(width, patterns, pairs, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return KpaDemo.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./spi_demo_bg.js": import0,
    };
}

const CoaDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_coademo_free(ptr, 1));
const DecryptDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_decryptdemo_free(ptr, 1));
const KpaDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_kpademo_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('spi_demo_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
