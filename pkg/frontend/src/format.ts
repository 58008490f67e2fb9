/** Display formatting.  State keeps full precision; only the strings
 * shown to the user are rounded. */

/** Currency-like values: two decimals, thousands untouched. */
export function currency(value: number): string {
  return value.toFixed(2);
}

/** Signed change: a leading + for increases, two decimals. */
export function signedCurrency(value: number): string {
  const text = currency(Math.abs(value));
  if (value > 0) return `+${text}`;
  if (value < 0) return `-${text}`;
  return text;
}

/** Signed integer change. */
export function signedCount(value: number): string {
  return value > 0 ? `+${value}` : String(value);
}
