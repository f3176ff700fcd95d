/** FNV-1a checksum over the exact float64 bytes of numeric arrays.
 *
 * The renderer never transforms data, so the checksum of what it plots
 * must equal the checksum of the CSV columns it read.
 */

export function checksumNumbers(values: number[]): string {
  const buf = new ArrayBuffer(8);
  const f64 = new Float64Array(buf);
  const u8 = new Uint8Array(buf);
  let hash = 0xcbf29ce484222325n;
  const prime = 0x100000001b3n;
  const mask = 0xffffffffffffffffn;
  for (const v of values) {
    f64[0] = v;
    for (let i = 0; i < 8; i++) {
      hash ^= BigInt(u8[i]);
      hash = (hash * prime) & mask;
    }
  }
  return hash.toString(16).padStart(16, "0");
}

export function checksumArrays(arrays: number[][]): string {
  return checksumNumbers(arrays.flat());
}
