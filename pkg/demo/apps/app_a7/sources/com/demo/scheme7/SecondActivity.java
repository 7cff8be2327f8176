package com.demo.scheme7;

import android.app.Activity;
import android.os.Bundle;
import com.amazon.device.ads.*;

public class SecondActivity extends Activity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_second);
        AdLayout banner = (AdLayout) findViewById(R.id.amazonBanner);
        banner.loadAd();
        InterstitialAd interstitial = new InterstitialAd(this);
        interstitial.loadAd();
    }
}
