/** Wire types mirrored from the screening service API. */
/** Threshold lines drawn on the vitals chart. */
export const THRESHOLDS = {
    systolic: 180,
    heart_rate: 100,
    spo2: 92,
};
