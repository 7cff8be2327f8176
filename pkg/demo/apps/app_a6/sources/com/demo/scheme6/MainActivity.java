package com.demo.scheme6;

import android.app.Activity;
import android.os.Bundle;
import com.mopub.mobileads.MoPubInterstitial;
import com.mopub.mobileads.MoPubView;

public class MainActivity extends Activity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_main);
        MoPubView banner = (MoPubView) findViewById(R.id.mopubBanner);
        banner.loadAd();
        MoPubInterstitial interstitial = new MoPubInterstitial(this, "unit");
        interstitial.load();
    }
}
